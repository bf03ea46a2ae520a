#pragma once

#include "sheetmetrics/address.hpp"
#include "sheetmetrics/formula.hpp"
#include "sheetmetrics/workbook.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sheetmetrics {

// One syntactic reference occurrence pinned to a sheet: a single cell
// (1x1) or a rectangle.
struct ReferenceGroup {
    std::string sheet;
    GridPoint top_left;
    GridPoint bottom_right;
    RefOccurrence origin;

    std::size_t width() const noexcept {
        return static_cast<std::size_t>(bottom_right.column - top_left.column + 1);
    }
    std::size_t height() const noexcept {
        return static_cast<std::size_t>(bottom_right.row - top_left.row + 1);
    }
    std::size_t size() const noexcept { return width() * height(); }

    friend bool operator==(const ReferenceGroup& a, const ReferenceGroup& b) {
        return sheet_names_equal(a.sheet, b.sheet) && a.top_left == b.top_left &&
               a.bottom_right == b.bottom_right;
    }
};

// Unqualified occurrences adopt context.sheet. Endpoints are normalized.
// No workbook check happens here.
ReferenceGroup resolve(const RefOccurrence& occurrence, const CellAddress& context);

// Resolves every occurrence of a formula and rewrites sheet names to the
// workbook's spelling. Throws UnknownSheetError.
std::vector<ReferenceGroup> resolve_all(std::span<const RefOccurrence> occurrences,
                                        const CellAddress& context, const Workbook& workbook);

// Row-major enumeration of the rectangle.
std::vector<CellAddress> expand(const ReferenceGroup& group);

// Concatenated expansion, multiplicity preserved.
std::vector<CellAddress> expand_all(std::span<const ReferenceGroup> groups);

// "Sheet1!C54:C94"
std::string render_group(const ReferenceGroup& group);

}  // namespace sheetmetrics
