#include "sheetmetrics/metrics.hpp"

#include "sheetmetrics/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <tuple>

namespace sheetmetrics {

MetricsConfig MetricsConfig::paper_compatible() {
    MetricsConfig config;
    config.distant_row_threshold = 20;
    config.paper_compat = true;
    return config;
}

void MetricsConfig::validate() const {
    if (distant_col_threshold < 1 || distant_row_threshold < 1) {
        throw std::invalid_argument("distance thresholds must be at least 1");
    }
    if (conditional_functions.empty()) {
        throw std::invalid_argument("the conditional function set must not be empty");
    }
}

double Percentage::value() const noexcept {
    return defined() ? 100.0 * static_cast<double>(count_) / static_cast<double>(total_) : 0.0;
}

std::int64_t Percentage::truncated() const noexcept {
    return defined() ? static_cast<std::int64_t>(100 * count_ / total_) : 0;
}

std::int64_t Percentage::hundredths() const noexcept {
    if (!defined()) {
        return 0;
    }
    // round(10000 * count / total), half up, in integers.
    return static_cast<std::int64_t>((20000 * count_ + total_) / (2 * total_));
}

std::string Percentage::format(bool truncate) const {
    if (truncate) {
        return std::to_string(truncated());
    }
    const auto h = hundredths();
    return fmt::format("{}.{:02}", h / 100, h % 100);
}

std::size_t m1_1_reference_count(std::span<const ReferenceGroup> groups) {
    std::size_t total = 0;
    for (const auto& group : groups) {
        total += group.size();
    }
    return total;
}

std::size_t m1_2_range_count(std::span<const ReferenceGroup> groups) {
    return groups.size();
}

int m1_3_conditional(const FormulaAst& ast, const MetricsConfig& config) {
    for (const auto& name : function_calls(ast)) {
        for (const auto& conditional : config.conditional_functions) {
            if (sheet_names_equal(name, conditional)) {
                return 1;
            }
        }
    }
    return 0;
}

std::size_t m1_4_nesting(const FormulaAst& ast) {
    return ast_height(ast);
}

std::size_t m1_5_chain(const PrecedentGraph& graph, const CellAddress& cell) {
    return chain_length(graph, cell);
}

namespace {

template <typename Pred>
Percentage share(std::span<const CellAddress> cells, Pred pred) {
    const auto hits = static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), pred));
    return Percentage(hits, cells.size());
}

}  // namespace

Percentage m2_1_reverse_pct(std::span<const CellAddress> cells, const CellAddress& formula,
                            const Workbook& workbook) {
    const std::size_t home = workbook.sheet_ordinal(formula.sheet);
    return share(cells, [&](const CellAddress& c) {
        if (sheet_names_equal(c.sheet, formula.sheet)) {
            return c.column > formula.column || c.row > formula.row;
        }
        return workbook.sheet_ordinal(c.sheet) > home;
    });
}

Percentage m2_2_same_row_pct(std::span<const CellAddress> cells, const CellAddress& formula) {
    return share(cells, [&](const CellAddress& c) {
        return sheet_names_equal(c.sheet, formula.sheet) && c.row == formula.row;
    });
}

Percentage m2_3_same_col_pct(std::span<const CellAddress> cells, const CellAddress& formula) {
    return share(cells, [&](const CellAddress& c) {
        return sheet_names_equal(c.sheet, formula.sheet) && c.column == formula.column;
    });
}

Percentage m2_4_distant_pct(std::span<const CellAddress> cells, const CellAddress& formula,
                            const MetricsConfig& config) {
    return share(cells, [&](const CellAddress& c) {
        return !sheet_names_equal(c.sheet, formula.sheet) ||
               std::abs(c.column - formula.column) > config.distant_col_threshold ||
               std::abs(c.row - formula.row) > config.distant_row_threshold;
    });
}

namespace {

// Everything except the chain length, which needs the graph.
FormulaMetrics local_metrics(const Workbook& workbook, const Cell& cell,
                             const MetricsConfig& config) {
    const auto ast = parse_formula(*cell.formula());
    const auto occurrences = reference_occurrences(ast);
    const auto groups = resolve_all(occurrences, cell.address, workbook);
    const auto cells = expand_all(groups);

    FormulaMetrics m;
    m.m1_1 = m1_1_reference_count(groups);
    m.m1_2 = m1_2_range_count(groups);
    m.m1_3 = m1_3_conditional(ast, config);
    m.m1_4 = m1_4_nesting(ast);
    m.m2_1 = m2_1_reverse_pct(cells, cell.address, workbook);
    m.m2_2 = m2_2_same_row_pct(cells, cell.address);
    m.m2_3 = m2_3_same_col_pct(cells, cell.address);
    m.m2_4 = m2_4_distant_pct(cells, cell.address, config);
    return m;
}

}  // namespace

FormulaMetrics compute_all(const Workbook& workbook, const PrecedentGraph& graph,
                           const CellAddress& formula, const MetricsConfig& config) {
    config.validate();
    const Cell* cell = workbook.find_cell(formula);
    if (cell == nullptr || !cell->is_formula()) {
        throw Error(render_address(formula) + " is not a formula cell");
    }
    FormulaMetrics m = local_metrics(workbook, *cell, config);
    m.m1_5 = m1_5_chain(graph, cell->address);
    return m;
}

namespace {

// Copy of the workbook with the broken formula cells left empty, so the
// remaining formulas can still be checked for cycles.
Workbook without_cells(const Workbook& workbook, const std::vector<CellDiagnostic>& broken) {
    std::vector<Sheet> sheets;
    for (const auto& sheet : workbook.sheets()) {
        Sheet copy(sheet.name());
        sheet.for_each_cell([&](const Cell& cell) {
            const bool drop = std::any_of(broken.begin(), broken.end(),
                                          [&](const CellDiagnostic& d) { return d.cell == cell.address; });
            copy.add_cell(cell.address.point(), drop ? CellContent{} : cell.content);
        });
        sheets.push_back(std::move(copy));
    }
    return Workbook(std::move(sheets));
}

}  // namespace

std::vector<FormulaReport> analyze_workbook(const Workbook& workbook, const MetricsConfig& config,
                                            std::span<const CellAddress> only) {
    config.validate();
    std::vector<CellDiagnostic> diagnostics;
    const PrecedentGraph graph = [&] {
        try {
            return build_graph(workbook);
        } catch (const BuildError& e) {
            diagnostics = e.diagnostics();
            return build_graph(without_cells(workbook, diagnostics));
        }
    }();
    const ChainLengths chains(graph);
    auto broken = [&](const CellAddress& address) {
        return std::any_of(diagnostics.begin(), diagnostics.end(),
                           [&](const CellDiagnostic& d) { return d.cell == address; });
    };

    std::vector<const Cell*> targets;
    if (only.empty()) {
        targets = workbook.formula_cells();
    } else {
        for (const auto& address : only) {
            const Cell* cell = workbook.find_cell(address);
            if (cell == nullptr || !cell->is_formula()) {
                throw Error(render_address(address) + " is not a formula cell");
            }
            targets.push_back(cell);
        }
        std::sort(targets.begin(), targets.end(), [&](const Cell* a, const Cell* b) {
            const auto ka = std::tuple(workbook.sheet_ordinal(a->address.sheet), a->address.row,
                                       a->address.column);
            const auto kb = std::tuple(workbook.sheet_ordinal(b->address.sheet), b->address.row,
                                       b->address.column);
            return ka < kb;
        });
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    }

    std::vector<FormulaReport> reports;
    for (const Cell* cell : targets) {
        if (broken(cell->address)) {
            continue;
        }
        const std::size_t node = *graph.find(cell->address);
        if (const auto* cycle = chains.blocking_cycle(node)) {
            const bool on_cycle = std::find(cycle->begin(), cycle->end(), cell->address) !=
                                  cycle->end();
            diagnostics.push_back(
                {cell->address, on_cycle ? CycleError(*cycle).what()
                                         : std::string("depends on a ") + CycleError(*cycle).what()});
            continue;
        }
        FormulaReport report{cell->address, *cell->formula(),
                             local_metrics(workbook, *cell, config)};
        report.metrics.m1_5 = *chains.at(node);
        reports.push_back(std::move(report));
    }
    if (!diagnostics.empty()) {
        const auto key = [&](const CellDiagnostic& d) {
            return std::tuple(workbook.sheet_ordinal(d.cell.sheet), d.cell.row, d.cell.column);
        };
        std::stable_sort(diagnostics.begin(), diagnostics.end(),
                         [&](const CellDiagnostic& a, const CellDiagnostic& b) { return key(a) < key(b); });
    }
    if (!diagnostics.empty()) {
        throw BuildError(std::move(diagnostics));
    }
    return reports;
}

}  // namespace sheetmetrics
