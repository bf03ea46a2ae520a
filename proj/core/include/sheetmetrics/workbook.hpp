#pragma once

#include "sheetmetrics/address.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sheetmetrics {

// Formula source without the leading "=".
struct FormulaText {
    std::string source;

    friend bool operator==(const FormulaText&, const FormulaText&) = default;
};

using CellContent = std::variant<std::monostate, double, std::string, bool, FormulaText>;

struct Cell {
    CellAddress address;
    CellContent content;

    bool is_formula() const noexcept { return std::holds_alternative<FormulaText>(content); }
    // nullptr for non-formula cells.
    const std::string* formula() const noexcept;

    friend bool operator==(const Cell&, const Cell&) = default;
};

// One worksheet. Cells iterate row-major (row, then column).
class Sheet {
public:
    explicit Sheet(std::string name);

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return cells_.size(); }

    // Throws LoadError on a duplicate position or an out-of-grid point.
    void add_cell(GridPoint point, CellContent content);

    const Cell* find(GridPoint point) const;

    template <typename Fn>
    void for_each_cell(Fn&& fn) const {
        for (const auto& [key, cell] : cells_) {
            fn(cell);
        }
    }

    friend bool operator==(const Sheet&, const Sheet&) = default;

private:
    using Key = std::pair<std::int32_t, std::int32_t>;  // (row, column)

    std::string name_;
    std::map<Key, Cell> cells_;
};

// Ordered sheets; the order is the left-to-right tab order. Immutable once built.
class Workbook {
public:
    Workbook() = default;
    // Throws LoadError when two sheets share a name (case-insensitive).
    explicit Workbook(std::vector<Sheet> sheets);

    std::span<const Sheet> sheets() const noexcept { return sheets_; }

    const Sheet* find_sheet(std::string_view name) const noexcept;
    // 1-based tab position. Throws UnknownSheetError.
    std::size_t sheet_ordinal(std::string_view name) const;
    // The stored spelling of a sheet name. Throws UnknownSheetError.
    const std::string& canonical_sheet_name(std::string_view name) const;

    const Cell* find_cell(const CellAddress& address) const;

    // Formula cells ordered by sheet ordinal, then row, then column.
    std::vector<const Cell*> formula_cells() const;

    friend bool operator==(const Workbook&, const Workbook&) = default;

private:
    std::vector<Sheet> sheets_;
};

// Strips one leading "=" if present.
std::string normalize_formula(std::string_view text);

// Parses the canonical JSON document:
//   {"sheets":[{"name":"S1","cells":{"D29":{"formula":"..."},"C4":{"value":1}}}]}
// Throws LoadError with a location such as `sheets[0].cells["D29"]`.
Workbook load_workbook(std::string_view document);
Workbook load_workbook_file(const std::filesystem::path& path);

// Serializes back to the canonical format. Output is deterministic.
std::string dump_workbook(const Workbook& workbook);

}  // namespace sheetmetrics
