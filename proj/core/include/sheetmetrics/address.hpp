#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sheetmetrics {

inline constexpr std::int32_t kMaxColumn = 16384;
inline constexpr std::int32_t kMaxRow = 1048576;

// Position on a single sheet, 1-based.
struct GridPoint {
    std::int32_t column = 1;
    std::int32_t row = 1;

    friend constexpr bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct CellAddress {
    std::string sheet;
    std::int32_t column = 1;
    std::int32_t row = 1;

    GridPoint point() const noexcept { return {column, row}; }

    // Sheet names compare case-insensitively.
    friend bool operator==(const CellAddress& a, const CellAddress& b);
    friend std::strong_ordering operator<=>(const CellAddress& a, const CellAddress& b);
};

// ASCII case folding used for every sheet-name comparison.
std::string fold_sheet_name(std::string_view name);
bool sheet_names_equal(std::string_view a, std::string_view b) noexcept;

// Bijective base-26: "A" -> 1, "Z" -> 26, "AA" -> 27. Case-insensitive.
// Throws AddressError for empty or non-letter input and for columns past kMaxColumn.
std::int32_t column_name_to_index(std::string_view name);
std::string column_index_to_name(std::int32_t index);

// `[<sheet>!]<letters><digits>` with optional `$` markers and an optionally
// single-quoted sheet name ('' escapes a quote). Unqualified text adopts
// default_sheet.
CellAddress parse_address(std::string_view text, std::string_view default_sheet);

// "D29"
std::string render_cell(GridPoint point);
// "Sheet1!D29" or "'Input Information'!E19"
std::string render_address(const CellAddress& address);
// Quotes the name when it is not a plain identifier.
std::string render_sheet_name(std::string_view name);

bool in_grid(GridPoint point) noexcept;

}  // namespace sheetmetrics
