#include "sheetmetrics/references.hpp"

#include <algorithm>

namespace sheetmetrics {

ReferenceGroup resolve(const RefOccurrence& occurrence, const CellAddress& context) {
    const auto& target = occurrence.target;
    ReferenceGroup group;
    group.sheet = target.sheet ? *target.sheet : context.sheet;
    group.top_left = {std::min(target.start.point.column, target.end.point.column),
                      std::min(target.start.point.row, target.end.point.row)};
    group.bottom_right = {std::max(target.start.point.column, target.end.point.column),
                          std::max(target.start.point.row, target.end.point.row)};
    group.origin = occurrence;
    return group;
}

std::vector<ReferenceGroup> resolve_all(std::span<const RefOccurrence> occurrences,
                                        const CellAddress& context, const Workbook& workbook) {
    std::vector<ReferenceGroup> groups;
    groups.reserve(occurrences.size());
    for (const auto& occurrence : occurrences) {
        ReferenceGroup group = resolve(occurrence, context);
        group.sheet = workbook.canonical_sheet_name(group.sheet);
        groups.push_back(std::move(group));
    }
    return groups;
}

std::vector<CellAddress> expand(const ReferenceGroup& group) {
    std::vector<CellAddress> cells;
    cells.reserve(group.size());
    for (auto row = group.top_left.row; row <= group.bottom_right.row; ++row) {
        for (auto column = group.top_left.column; column <= group.bottom_right.column; ++column) {
            cells.push_back(CellAddress{group.sheet, column, row});
        }
    }
    return cells;
}

std::vector<CellAddress> expand_all(std::span<const ReferenceGroup> groups) {
    std::vector<CellAddress> cells;
    for (const auto& group : groups) {
        auto part = expand(group);
        cells.insert(cells.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
    }
    return cells;
}

std::string render_group(const ReferenceGroup& group) {
    std::string out = render_sheet_name(group.sheet) + "!" + render_cell(group.top_left);
    if (group.size() > 1) {
        out += ":" + render_cell(group.bottom_right);
    }
    return out;
}

}  // namespace sheetmetrics
