#include "sheetmetrics/address.hpp"

#include "sheetmetrics/errors.hpp"

#include <algorithm>
#include <cctype>

namespace sheetmetrics {

namespace {

char fold(char c) noexcept {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_alpha(char c) noexcept { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) noexcept { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_plain_sheet_name(std::string_view name) {
    if (name.empty() || !(is_alpha(name.front()) || name.front() == '_')) {
        return false;
    }
    if (!std::all_of(name.begin(), name.end(), [](char c) {
            return is_alpha(c) || is_digit(c) || c == '_' || c == '.';
        })) {
        return false;
    }
    // A name that reads as a cell reference ("AB12") must be quoted.
    auto letters = std::find_if_not(name.begin(), name.end(), is_alpha);
    if (letters != name.end() && letters - name.begin() <= 3 &&
        std::all_of(letters, name.end(), is_digit)) {
        return false;
    }
    return !sheet_names_equal(name, "TRUE") && !sheet_names_equal(name, "FALSE");
}

}  // namespace

std::string fold_sheet_name(std::string_view name) {
    std::string folded(name);
    std::transform(folded.begin(), folded.end(), folded.begin(), fold);
    return folded;
}

bool sheet_names_equal(std::string_view a, std::string_view b) noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](char x, char y) { return fold(x) == fold(y); });
}

bool operator==(const CellAddress& a, const CellAddress& b) {
    return a.column == b.column && a.row == b.row && sheet_names_equal(a.sheet, b.sheet);
}

std::strong_ordering operator<=>(const CellAddress& a, const CellAddress& b) {
    if (auto c = fold_sheet_name(a.sheet) <=> fold_sheet_name(b.sheet); c != 0) {
        return c;
    }
    if (auto c = a.row <=> b.row; c != 0) {
        return c;
    }
    return a.column <=> b.column;
}

std::int32_t column_name_to_index(std::string_view name) {
    if (name.empty()) {
        throw AddressError("empty column name", std::string(name));
    }
    std::int64_t value = 0;
    for (char c : name) {
        if (!is_alpha(c) || static_cast<unsigned char>(c) > 0x7f) {
            throw AddressError("column name must contain only letters: '" + std::string(name) + "'",
                               std::string(name));
        }
        value = value * 26 + (std::toupper(static_cast<unsigned char>(c)) - 'A' + 1);
        if (value > kMaxColumn) {
            throw AddressError("column '" + std::string(name) + "' is beyond the grid limit",
                               std::string(name));
        }
    }
    return static_cast<std::int32_t>(value);
}

std::string column_index_to_name(std::int32_t index) {
    if (index < 1 || index > kMaxColumn) {
        throw AddressError("column index out of range: " + std::to_string(index),
                           std::to_string(index));
    }
    std::string name;
    while (index > 0) {
        --index;
        name.insert(name.begin(), static_cast<char>('A' + index % 26));
        index /= 26;
    }
    return name;
}

bool in_grid(GridPoint point) noexcept {
    return point.column >= 1 && point.column <= kMaxColumn && point.row >= 1 &&
           point.row <= kMaxRow;
}

CellAddress parse_address(std::string_view text, std::string_view default_sheet) {
    const std::string whole(text);
    CellAddress address;
    address.sheet = std::string(default_sheet);

    std::string_view rest = text;
    if (!rest.empty() && rest.front() == '\'') {
        std::string sheet;
        std::size_t i = 1;
        bool closed = false;
        while (i < rest.size()) {
            if (rest[i] == '\'') {
                if (i + 1 < rest.size() && rest[i + 1] == '\'') {
                    sheet.push_back('\'');
                    i += 2;
                    continue;
                }
                closed = true;
                ++i;
                break;
            }
            sheet.push_back(rest[i++]);
        }
        if (!closed) {
            throw AddressError("unterminated sheet quote in '" + whole + "'", whole);
        }
        if (i >= rest.size() || rest[i] != '!') {
            throw AddressError("expected '!' after quoted sheet name in '" + whole + "'", whole);
        }
        if (sheet.empty()) {
            throw AddressError("empty sheet name in '" + whole + "'", whole);
        }
        address.sheet = std::move(sheet);
        rest.remove_prefix(i + 1);
    } else if (auto bang = rest.find('!'); bang != std::string_view::npos) {
        if (bang == 0) {
            throw AddressError("empty sheet name in '" + whole + "'", whole);
        }
        address.sheet = std::string(rest.substr(0, bang));
        rest.remove_prefix(bang + 1);
    }

    std::size_t i = 0;
    if (i < rest.size() && rest[i] == '$') {
        ++i;
    }
    const std::size_t letters_begin = i;
    while (i < rest.size() && is_alpha(rest[i])) {
        ++i;
    }
    const std::string_view letters = rest.substr(letters_begin, i - letters_begin);
    if (letters.empty()) {
        throw AddressError("missing column letters in '" + std::string(rest) + "'",
                           std::string(rest));
    }
    if (i < rest.size() && rest[i] == '$') {
        ++i;
    }
    const std::size_t digits_begin = i;
    while (i < rest.size() && is_digit(rest[i])) {
        ++i;
    }
    const std::string_view digits = rest.substr(digits_begin, i - digits_begin);
    if (digits.empty()) {
        throw AddressError("missing row number in '" + std::string(rest) + "'", std::string(rest));
    }
    if (i != rest.size()) {
        throw AddressError("unexpected trailing text '" + std::string(rest.substr(i)) + "'",
                           std::string(rest.substr(i)));
    }

    address.column = column_name_to_index(letters);
    std::int64_t row = 0;
    for (char c : digits) {
        row = row * 10 + (c - '0');
        if (row > kMaxRow) {
            throw AddressError("row '" + std::string(digits) + "' is beyond the grid limit",
                               std::string(digits));
        }
    }
    if (row == 0) {
        throw AddressError("row 0 is not a valid row in '" + std::string(rest) + "'",
                           std::string(rest));
    }
    address.row = static_cast<std::int32_t>(row);
    return address;
}

std::string render_cell(GridPoint point) {
    return column_index_to_name(point.column) + std::to_string(point.row);
}

std::string render_sheet_name(std::string_view name) {
    if (is_plain_sheet_name(name)) {
        return std::string(name);
    }
    std::string quoted = "'";
    for (char c : name) {
        if (c == '\'') {
            quoted.push_back('\'');
        }
        quoted.push_back(c);
    }
    quoted.push_back('\'');
    return quoted;
}

std::string render_address(const CellAddress& address) {
    return render_sheet_name(address.sheet) + "!" + render_cell(address.point());
}

}  // namespace sheetmetrics
