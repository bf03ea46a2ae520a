#include "sheetmetrics/csv.hpp"

#include "sheetmetrics/errors.hpp"

namespace sheetmetrics::csv {

std::vector<Record> parse(std::string_view text) {
    std::vector<Record> records;
    Record current;
    std::string field;
    std::size_t line = 1;
    std::size_t i = 0;
    bool record_started = false;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        if (record_started) {
            end_field();
            records.push_back(std::move(current));
        }
        current = Record{};
        record_started = false;
    };

    while (i < text.size()) {
        const char c = text[i];
        if (!record_started) {
            current.line = line;
        }
        if (c == '"') {
            if (!field.empty()) {
                throw InputError("stray quote inside unquoted field", line);
            }
            record_started = true;
            const std::size_t opened_at = line;
            ++i;
            while (true) {
                if (i >= text.size()) {
                    throw InputError("unterminated quoted field", opened_at);
                }
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                if (text[i] == '\n') {
                    ++line;
                }
                field.push_back(text[i++]);
            }
            if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                throw InputError("unexpected text after closing quote", line);
            }
            continue;
        }
        if (c == ',') {
            record_started = true;
            end_field();
            ++i;
            continue;
        }
        if (c == '\r' || c == '\n') {
            end_record();
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            ++i;
            ++line;
            continue;
        }
        record_started = true;
        field.push_back(c);
        ++i;
    }
    end_record();
    return records;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace sheetmetrics::csv
