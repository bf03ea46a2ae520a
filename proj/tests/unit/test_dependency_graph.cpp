#include "sheetmetrics/dependency_graph.hpp"
#include "sheetmetrics/errors.hpp"
#include "sheetmetrics/workbook.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace sheetmetrics;

namespace {

Workbook sheet_of(std::initializer_list<std::pair<const char*, CellContent>> cells) {
    Sheet sheet("S");
    for (const auto& [where, content] : cells) {
        sheet.add_cell(parse_address(where, "S").point(), content);
    }
    std::vector<Sheet> sheets;
    sheets.push_back(std::move(sheet));
    return Workbook(std::move(sheets));
}

CellAddress at(const char* where) {
    return parse_address(where, "S");
}

std::vector<std::pair<std::string, std::string>> rendered_edges(const PrecedentGraph& g) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [from, to] : g.edges()) {
        out.emplace_back(render_cell(from.point()), render_cell(to.point()));
    }
    return out;
}

}  // namespace

TEST_CASE("build_graph edges") {
    using E = std::vector<std::pair<std::string, std::string>>;
    CHECK(rendered_edges(build_graph(sheet_of({{"A1", 5.0}, {"B1", FormulaText{"A1+1"}}}))) ==
          E{{"B1", "A1"}});
    CHECK(rendered_edges(build_graph(sheet_of({{"D21", FormulaText{"SUM(D18:D19)"}}}))) ==
          E{{"D21", "D18"}, {"D21", "D19"}});
    CHECK(rendered_edges(build_graph(sheet_of({{"A1", FormulaText{"A1"}}}))) == E{{"A1", "A1"}});
    // duplicates collapse into one edge
    CHECK(build_graph(sheet_of({{"B1", FormulaText{"A1+A1+SUM(A1:A1)"}}})).edge_count() == 1);
}

TEST_CASE("build_graph reports every failing cell") {
    const auto wb = sheet_of({{"A1", FormulaText{"1+"}},
                              {"A2", FormulaText{"A1"}},
                              {"A3", FormulaText{"Gone!B1"}}});
    try {
        build_graph(wb);
        FAIL("expected BuildError");
    } catch (const BuildError& e) {
        REQUIRE(e.diagnostics().size() == 2);
        CHECK(e.diagnostics()[0].cell == at("A1"));
        CHECK(e.diagnostics()[1].cell == at("A3"));
    }
}

TEST_CASE("detect_cycles") {
    CHECK(detect_cycles(build_graph(sheet_of({{"A1", 1.0}, {"B1", FormulaText{"A1"}}}))).empty());

    const auto two = detect_cycles(
        build_graph(sheet_of({{"A1", FormulaText{"B1"}}, {"B1", FormulaText{"A1"}}})));
    REQUIRE(two.size() == 1);
    CHECK(two[0] == std::vector<CellAddress>{at("A1"), at("B1")});

    const auto self = detect_cycles(build_graph(sheet_of({{"A1", FormulaText{"A1"}}})));
    REQUIRE(self.size() == 1);
    CHECK(self[0] == std::vector<CellAddress>{at("A1")});

    // every reported cycle is a genuine closed walk
    const auto wb = sheet_of({{"A1", FormulaText{"B1+C1"}},
                              {"B1", FormulaText{"C1"}},
                              {"C1", FormulaText{"A1"}},
                              {"D1", FormulaText{"D1+A1"}}});
    const auto graph = build_graph(wb);
    const auto cycles = detect_cycles(graph);
    REQUIRE(cycles.size() == 2);
    for (const auto& cycle : cycles) {
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            const auto from = *graph.find(cycle[i]);
            const auto to = *graph.find(cycle[(i + 1) % cycle.size()]);
            const auto succ = graph.precedents(from);
            CHECK(std::find(succ.begin(), succ.end(), to) != succ.end());
        }
    }
}

TEST_CASE("chain_length examples") {
    const auto wb = sheet_of(
        {{"A1", 3.0}, {"B1", FormulaText{"A1+1"}}, {"C1", FormulaText{"B1*2"}}});
    const auto graph = build_graph(wb);
    CHECK(chain_length(graph, at("A1")) == 0);
    CHECK(chain_length(graph, at("B1")) == 1);
    CHECK(chain_length(graph, at("C1")) == 2);
    CHECK(chain_length(graph, at("Z99")) == 0);

    std::map<std::string, std::vector<std::string>> edges{{"C1", {"B1"}}, {"B1", {"A1"}}};
    CHECK(oracle::longest_path_by_enumeration(edges, std::string("C1")) == 2);
}

TEST_CASE("chain_length of a linear chain of depth 8") {
    std::initializer_list<std::pair<const char*, CellContent>> cells{
        {"A1", 1.0},
        {"A2", FormulaText{"A1+1"}},
        {"A3", FormulaText{"A2+1"}},
        {"A4", FormulaText{"A3+1"}},
        {"A5", FormulaText{"A4+1"}},
        {"A6", FormulaText{"A5+1"}},
        {"A7", FormulaText{"A6+1"}},
        {"A8", FormulaText{"A7+1"}},
        {"A9", FormulaText{"A8+1"}}};
    CHECK(chain_length(build_graph(sheet_of(cells)), at("A9")) == 8);
}

TEST_CASE("chain_length raises CycleError naming the cycle") {
    const auto graph = build_graph(sheet_of({{"A1", FormulaText{"B1"}},
                                             {"B1", FormulaText{"A1"}},
                                             {"C1", FormulaText{"A1+1"}},
                                             {"D1", 4.0}}));
    try {
        chain_length(graph, at("C1"));
        FAIL("expected CycleError");
    } catch (const CycleError& e) {
        CHECK(e.cycle() == std::vector<CellAddress>{at("A1"), at("B1")});
        CHECK(std::string(e.what()) == "circular reference: S!A1 -> S!B1 -> S!A1");
    }
    CHECK(chain_length(graph, at("D1")) == 0);

    const ChainLengths all(graph);
    CHECK_FALSE(all.at(*graph.find(at("C1"))).has_value());
    CHECK(all.blocking_cycle(*graph.find(at("C1"))) != nullptr);
    // unreferenced value cells are not graph nodes
    CHECK_FALSE(graph.find(at("D1")).has_value());
    CHECK(all.at(*graph.find(at("A1"))) == std::nullopt);
}

TEST_CASE("chain lengths on random acyclic workbooks match path enumeration") {
    std::mt19937 rng(99);
    for (int round = 0; round < 100; ++round) {
        const auto dag = testing_support::random_dag_workbook(rng, 12);
        const auto graph = build_graph(dag.workbook);
        CHECK(detect_cycles(graph).empty());
        const ChainLengths all(graph);
        for (const auto& [cell, refs] : dag.references) {
            CAPTURE(cell);
            const auto expected = oracle::longest_path_by_enumeration(dag.references, cell);
            const auto address = parse_address(cell, "Data");
            CHECK(chain_length(graph, address) == expected);
            CHECK(all.at(*graph.find(address)) == std::optional<std::size_t>(expected));
        }
    }
}

TEST_CASE("graph does not depend on sheet insertion order") {
    Sheet forward("S");
    forward.add_cell({1, 1}, 1.0);
    forward.add_cell({2, 1}, FormulaText{"A1"});
    Sheet backward("S");
    backward.add_cell({2, 1}, FormulaText{"A1"});
    backward.add_cell({1, 1}, 1.0);
    std::vector<Sheet> a;
    a.push_back(std::move(forward));
    std::vector<Sheet> b;
    b.push_back(std::move(backward));
    CHECK(build_graph(Workbook(std::move(a))).edges() == build_graph(Workbook(std::move(b))).edges());
}
