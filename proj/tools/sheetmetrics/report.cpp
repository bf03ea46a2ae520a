#include "sheetmetrics/report.hpp"

#include "sheetmetrics/csv.hpp"

#include <json.hpp>

#include <cstdlib>

namespace sheetmetrics::cli {

namespace {

void write_csv(std::ostream& out, const Table& table) {
    auto line = [&](const auto& cells, auto text_of) {
        bool first = true;
        for (const auto& cell : cells) {
            if (!first) {
                out << ',';
            }
            out << csv::escape(text_of(cell));
            first = false;
        }
        out << '\n';
    };
    line(table.header, [](const std::string& s) -> const std::string& { return s; });
    for (const auto& row : table.rows) {
        line(row, [](const Field& f) -> const std::string& { return f.text; });
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json object = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) {
            const Field& f = row[i];
            switch (f.kind) {
            case Field::Kind::Integer:
                object[table.header[i]] = std::strtoll(f.text.c_str(), nullptr, 10);
                break;
            case Field::Kind::Decimal:
                object[table.header[i]] = std::strtod(f.text.c_str(), nullptr);
                break;
            case Field::Kind::Text:
                object[table.header[i]] = f.text;
                break;
            }
        }
        rows.push_back(std::move(object));
    }
    out << rows.dump(2) << '\n';
}

}  // namespace

void write_table(std::ostream& out, const Table& table, Format format) {
    if (format == Format::Json) {
        write_json(out, table);
    } else {
        write_csv(out, table);
    }
}

}  // namespace sheetmetrics::cli
