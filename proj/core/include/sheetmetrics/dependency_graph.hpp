#pragma once

#include "sheetmetrics/address.hpp"
#include "sheetmetrics/errors.hpp"
#include "sheetmetrics/workbook.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sheetmetrics {

struct CellDiagnostic {
    CellAddress cell;
    std::string message;
};

// Every formula that failed to parse or resolve, in workbook order.
class BuildError : public Error {
public:
    explicit BuildError(std::vector<CellDiagnostic> diagnostics);

    const std::vector<CellDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<CellDiagnostic> diagnostics_;
};

// A formula's precedents loop back on themselves. cycle() lists the cells of
// one directed cycle in traversal order.
class CycleError : public Error {
public:
    explicit CycleError(std::vector<CellAddress> cycle);

    const std::vector<CellAddress>& cycle() const noexcept { return cycle_; }

private:
    std::vector<CellAddress> cycle_;
};

// Formula cell -> every cell its references cover. Nodes are numbered by
// (sheet ordinal, row, column), so the graph does not depend on the order
// in which the workbook was read.
class PrecedentGraph {
public:
    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const CellAddress> nodes() const noexcept { return nodes_; }
    const CellAddress& node(std::size_t index) const { return nodes_.at(index); }
    std::optional<std::size_t> find(const CellAddress& address) const;

    bool is_formula(std::size_t index) const { return formula_.at(index) != 0; }
    // Sorted, no duplicates.
    std::span<const std::size_t> precedents(std::size_t index) const {
        return adjacency_.at(index);
    }

    std::size_t edge_count() const noexcept;
    std::vector<std::pair<CellAddress, CellAddress>> edges() const;

private:
    friend PrecedentGraph build_graph(const Workbook& workbook);

    std::vector<CellAddress> nodes_;
    std::vector<char> formula_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::map<CellAddress, std::size_t> index_;
};

// Throws BuildError listing every formula that fails to parse or names an
// unknown sheet.
PrecedentGraph build_graph(const Workbook& workbook);

// One genuine cycle per strongly connected component that contains a cycle,
// ordered by the component's first node. Empty iff the graph is a DAG.
std::vector<std::vector<CellAddress>> detect_cycles(const PrecedentGraph& graph);

// Longest directed path, in edges, starting at cell. 0 for value, empty and
// unknown cells. Throws CycleError when a cycle is reachable.
std::size_t chain_length(const PrecedentGraph& graph, const CellAddress& cell);

// Chain length of every node in one linear pass.
class ChainLengths {
public:
    explicit ChainLengths(const PrecedentGraph& graph);

    // nullopt when the node lies on or reaches a cycle.
    std::optional<std::size_t> at(std::size_t node) const;
    // The cycle blocking `node`, or nullptr.
    const std::vector<CellAddress>* blocking_cycle(std::size_t node) const;

private:
    static constexpr std::size_t kNoCycle = static_cast<std::size_t>(-1);

    std::vector<std::size_t> length_;
    std::vector<std::size_t> cycle_of_;
    std::vector<std::vector<CellAddress>> cycles_;
};

}  // namespace sheetmetrics
