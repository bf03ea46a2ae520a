#include "sheetmetrics/dependency_graph.hpp"

#include "sheetmetrics/formula.hpp"
#include "sheetmetrics/references.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

namespace sheetmetrics {

namespace {

std::string describe_cycle(const std::vector<CellAddress>& cycle) {
    std::string text = "circular reference: ";
    for (const auto& cell : cycle) {
        text += render_address(cell) + " -> ";
    }
    text += render_address(cycle.front());
    return text;
}

std::string describe_diagnostics(const std::vector<CellDiagnostic>& diagnostics) {
    std::string text = std::to_string(diagnostics.size()) + " formula(s) failed:";
    for (const auto& d : diagnostics) {
        text += "\n  " + render_address(d.cell) + ": " + d.message;
    }
    return text;
}

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

// Strongly connected components reachable from `roots`, emitted sinks first
// (every edge between components points at an earlier component).
// Iterative so deep chains cannot exhaust the call stack.
std::vector<std::vector<std::size_t>> tarjan(const PrecedentGraph& graph,
                                             std::span<const std::size_t> roots) {
    const std::size_t n = graph.size();
    std::vector<std::size_t> index(n, kUnvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next edge)
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    for (std::size_t root : roots) {
        if (index[root] != kUnvisited) {
            continue;
        }
        auto enter = [&](std::size_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = 1;
            frames.emplace_back(v, 0);
        };
        enter(root);
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            const auto succ = graph.precedents(v);
            if (next < succ.size()) {
                const std::size_t w = succ[next++];
                if (index[w] == kUnvisited) {
                    enter(w);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            frames.pop_back();
            if (low[done] == index[done]) {
                std::vector<std::size_t> component;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component.push_back(w);
                } while (w != done);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            if (!frames.empty()) {
                auto& parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return components;
}

bool has_self_loop(const PrecedentGraph& graph, std::size_t v) {
    const auto succ = graph.precedents(v);
    return std::binary_search(succ.begin(), succ.end(), v);
}

bool is_cyclic(const PrecedentGraph& graph, const std::vector<std::size_t>& component) {
    return component.size() > 1 || has_self_loop(graph, component.front());
}

// A shortest cycle through the component's first node, found by BFS inside
// the component.
std::vector<CellAddress> extract_cycle(const PrecedentGraph& graph,
                                       const std::vector<std::size_t>& component) {
    const std::size_t start = component.front();
    auto inside = [&](std::size_t v) {
        return std::binary_search(component.begin(), component.end(), v);
    };
    std::map<std::size_t, std::size_t> parent;
    std::deque<std::size_t> queue{start};
    parent[start] = start;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t w : graph.precedents(u)) {
            if (w == start) {
                std::vector<CellAddress> cycle;
                for (std::size_t x = u; x != start; x = parent[x]) {
                    cycle.push_back(graph.node(x));
                }
                cycle.push_back(graph.node(start));
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (inside(w) && !parent.contains(w)) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    return {graph.node(start)};  // unreachable for a cyclic component
}

struct ChainState {
    std::vector<std::size_t> length;
    std::vector<std::size_t> cycle_of;
    std::vector<std::vector<CellAddress>> cycles;
};

constexpr std::size_t kNoCycle = static_cast<std::size_t>(-1);

ChainState longest_paths(const PrecedentGraph& graph, std::span<const std::size_t> roots) {
    ChainState state;
    state.length.assign(graph.size(), 0);
    state.cycle_of.assign(graph.size(), kNoCycle);
    for (const auto& component : tarjan(graph, roots)) {
        if (is_cyclic(graph, component)) {
            state.cycles.push_back(extract_cycle(graph, component));
            for (std::size_t v : component) {
                state.cycle_of[v] = state.cycles.size() - 1;
            }
            continue;
        }
        const std::size_t v = component.front();
        const auto succ = graph.precedents(v);
        std::size_t best = 0;
        for (std::size_t w : succ) {
            if (state.cycle_of[w] != kNoCycle) {
                state.cycle_of[v] = state.cycle_of[w];
                break;
            }
            best = std::max(best, state.length[w] + 1);
        }
        state.length[v] = best;
    }
    return state;
}

}  // namespace

BuildError::BuildError(std::vector<CellDiagnostic> diagnostics)
    : Error(describe_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

CycleError::CycleError(std::vector<CellAddress> cycle)
    : Error(describe_cycle(cycle)), cycle_(std::move(cycle)) {}

std::optional<std::size_t> PrecedentGraph::find(const CellAddress& address) const {
    auto it = index_.find(address);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t PrecedentGraph::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& succ : adjacency_) {
        total += succ.size();
    }
    return total;
}

std::vector<std::pair<CellAddress, CellAddress>> PrecedentGraph::edges() const {
    std::vector<std::pair<CellAddress, CellAddress>> out;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        for (std::size_t w : adjacency_[v]) {
            out.emplace_back(nodes_[v], nodes_[w]);
        }
    }
    return out;
}

PrecedentGraph build_graph(const Workbook& workbook) {
    using Key = std::tuple<std::size_t, std::int32_t, std::int32_t>;
    auto key_of = [&](const CellAddress& a) {
        return Key{workbook.sheet_ordinal(a.sheet), a.row, a.column};
    };

    std::vector<CellDiagnostic> diagnostics;
    std::vector<std::pair<CellAddress, std::vector<CellAddress>>> formulas;
    std::map<Key, CellAddress> all_nodes;

    for (const Cell* cell : workbook.formula_cells()) {
        try {
            const auto ast = parse_formula(*cell->formula());
            const auto occurrences = reference_occurrences(ast);
            const auto groups = resolve_all(occurrences, cell->address, workbook);
            auto targets = expand_all(groups);
            for (const auto& target : targets) {
                all_nodes.emplace(key_of(target), target);
            }
            all_nodes.emplace(key_of(cell->address), cell->address);
            formulas.emplace_back(cell->address, std::move(targets));
        } catch (const ParseError& e) {
            diagnostics.push_back({cell->address, "parse error at offset " +
                                                      std::to_string(e.offset()) + ": " +
                                                      e.what()});
        } catch (const Error& e) {
            diagnostics.push_back({cell->address, e.what()});
        }
    }
    if (!diagnostics.empty()) {
        throw BuildError(std::move(diagnostics));
    }

    PrecedentGraph graph;
    for (const auto& [key, address] : all_nodes) {
        graph.index_.emplace(address, graph.nodes_.size());
        graph.nodes_.push_back(address);
    }
    graph.formula_.assign(graph.nodes_.size(), 0);
    graph.adjacency_.resize(graph.nodes_.size());
    for (const auto& [formula, targets] : formulas) {
        const std::size_t from = graph.index_.at(formula);
        graph.formula_[from] = 1;
        auto& succ = graph.adjacency_[from];
        for (const auto& target : targets) {
            succ.push_back(graph.index_.at(target));
        }
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    return graph;
}

std::vector<std::vector<CellAddress>> detect_cycles(const PrecedentGraph& graph) {
    std::vector<std::size_t> roots(graph.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        roots[i] = i;
    }
    auto components = tarjan(graph, roots);
    std::sort(components.begin(), components.end());
    std::vector<std::vector<CellAddress>> cycles;
    for (const auto& component : components) {
        if (is_cyclic(graph, component)) {
            cycles.push_back(extract_cycle(graph, component));
        }
    }
    return cycles;
}

std::size_t chain_length(const PrecedentGraph& graph, const CellAddress& cell) {
    const auto index = graph.find(cell);
    if (!index) {
        return 0;
    }
    const std::size_t root = *index;
    auto state = longest_paths(graph, std::span<const std::size_t>(&root, 1));
    if (state.cycle_of[root] != kNoCycle) {
        throw CycleError(std::move(state.cycles[state.cycle_of[root]]));
    }
    return state.length[root];
}

ChainLengths::ChainLengths(const PrecedentGraph& graph) {
    std::vector<std::size_t> roots(graph.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        roots[i] = i;
    }
    auto state = longest_paths(graph, roots);
    length_ = std::move(state.length);
    cycle_of_ = std::move(state.cycle_of);
    cycles_ = std::move(state.cycles);
}

std::optional<std::size_t> ChainLengths::at(std::size_t node) const {
    if (cycle_of_.at(node) != kNoCycle) {
        return std::nullopt;
    }
    return length_[node];
}

const std::vector<CellAddress>* ChainLengths::blocking_cycle(std::size_t node) const {
    const std::size_t c = cycle_of_.at(node);
    return c == kNoCycle ? nullptr : &cycles_[c];
}

}  // namespace sheetmetrics
