#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sheetmetrics::csv {

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

// RFC 4180: comma separated, double-quoted fields with "" escapes, CRLF or
// LF line ends. Blank lines are skipped. Throws InputError on a stray quote
// or an unterminated quoted field.
std::vector<Record> parse(std::string_view text);

// Quotes the field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

}  // namespace sheetmetrics::csv
