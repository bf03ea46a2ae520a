#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sheetmetrics::cli {

enum class Format { Csv, Json };

// A printed value. Numbers keep their printed text so CSV and JSON agree.
struct Field {
    enum class Kind { Text, Integer, Decimal };

    std::string text;
    Kind kind = Kind::Text;

    static Field str(std::string s) { return {std::move(s), Kind::Text}; }
    static Field integer(long long v) { return {std::to_string(v), Kind::Integer}; }
    static Field decimal(std::string printed) { return {std::move(printed), Kind::Decimal}; }
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Field>> rows;
};

// CSV: header line then one line per row, RFC 4180 quoting, "\n" line ends.
// JSON: an array of objects keyed by the header names in header order;
// Integer and Decimal fields become JSON numbers.
void write_table(std::ostream& out, const Table& table, Format format);

}  // namespace sheetmetrics::cli
