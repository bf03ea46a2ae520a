#pragma once

#include "sheetmetrics/address.hpp"
#include "sheetmetrics/dependency_graph.hpp"
#include "sheetmetrics/formula.hpp"
#include "sheetmetrics/references.hpp"
#include "sheetmetrics/workbook.hpp"

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace sheetmetrics {

struct MetricsConfig {
    std::set<std::string> conditional_functions{"IF",     "COUNTIF", "SUMIF",  "VLOOKUP",
                                                "HLOOKUP", "LOOKUP", "CHOOSE", "IFERROR"};
    std::int32_t distant_col_threshold = 10;
    std::int32_t distant_row_threshold = 25;
    // Truncated integer percentages when printing.
    bool paper_compat = false;

    // Row threshold 20 and truncated percentages, the conventions under which
    // the published reference values were computed.
    static MetricsConfig paper_compatible();

    // Throws std::invalid_argument when a threshold is < 1 or the function set is empty.
    void validate() const;
};

// count / total as an exact rational, scaled to percent on demand.
class Percentage {
public:
    constexpr Percentage() = default;
    constexpr Percentage(std::size_t count, std::size_t total) : count_(count), total_(total) {}

    constexpr std::size_t count() const noexcept { return count_; }
    constexpr std::size_t total() const noexcept { return total_; }
    constexpr bool defined() const noexcept { return total_ != 0; }

    // 0 when undefined.
    double value() const noexcept;
    // Toward zero: 7/18 -> 38.
    std::int64_t truncated() const noexcept;
    // Percent in hundredths, rounded half up: 2/7 -> 2857.
    std::int64_t hundredths() const noexcept;
    // "38" when truncating, "38.89" otherwise.
    std::string format(bool truncate) const;

    friend constexpr bool operator==(const Percentage&, const Percentage&) = default;

private:
    std::size_t count_ = 0;
    std::size_t total_ = 0;
};

struct FormulaMetrics {
    std::size_t m1_1 = 0;  // referenced cells, ranges expanded, repeats counted
    std::size_t m1_2 = 0;  // reference groups
    int m1_3 = 0;          // uses a conditional function
    std::size_t m1_4 = 0;  // parse-tree height
    std::size_t m1_5 = 0;  // calculation chain length
    Percentage m2_1;       // reverse references
    Percentage m2_2;       // same row
    Percentage m2_3;       // same column
    Percentage m2_4;       // distant

    bool has_references() const noexcept { return m1_1 != 0; }

    friend bool operator==(const FormulaMetrics&, const FormulaMetrics&) = default;
};

std::size_t m1_1_reference_count(std::span<const ReferenceGroup> groups);
std::size_t m1_2_range_count(std::span<const ReferenceGroup> groups);
int m1_3_conditional(const FormulaAst& ast, const MetricsConfig& config);
std::size_t m1_4_nesting(const FormulaAst& ast);
std::size_t m1_5_chain(const PrecedentGraph& graph, const CellAddress& cell);

// `cells` are the expanded referenced addresses with multiplicity.
// Reverse: right of or below the formula on its own sheet, or on a sheet
// further right in tab order. Throws UnknownSheetError.
Percentage m2_1_reverse_pct(std::span<const CellAddress> cells, const CellAddress& formula,
                            const Workbook& workbook);
Percentage m2_2_same_row_pct(std::span<const CellAddress> cells, const CellAddress& formula);
Percentage m2_3_same_col_pct(std::span<const CellAddress> cells, const CellAddress& formula);
// Distant: another sheet, or more than the configured columns/rows away.
Percentage m2_4_distant_pct(std::span<const CellAddress> cells, const CellAddress& formula,
                            const MetricsConfig& config);

// All nine metrics of one formula cell. Throws Error for a non-formula cell,
// ParseError, UnknownSheetError or CycleError.
FormulaMetrics compute_all(const Workbook& workbook, const PrecedentGraph& graph,
                           const CellAddress& formula, const MetricsConfig& config);

struct FormulaReport {
    CellAddress cell;
    std::string formula;
    FormulaMetrics metrics;
};

// Metrics for every formula cell (or just `only`, when non-empty), ordered by
// sheet ordinal, row, column. Throws BuildError with one diagnostic per
// failing cell: parse errors, unknown sheets, circular references.
std::vector<FormulaReport> analyze_workbook(const Workbook& workbook, const MetricsConfig& config,
                                            std::span<const CellAddress> only = {});

}  // namespace sheetmetrics
