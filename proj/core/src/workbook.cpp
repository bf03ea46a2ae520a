#include "sheetmetrics/workbook.hpp"

#include "sheetmetrics/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace sheetmetrics {

using json = nlohmann::json;

const std::string* Cell::formula() const noexcept {
    if (const auto* f = std::get_if<FormulaText>(&content)) {
        return &f->source;
    }
    return nullptr;
}

Sheet::Sheet(std::string name) : name_(std::move(name)) {
    if (name_.empty()) {
        throw LoadError("sheet name must not be empty", "");
    }
}

void Sheet::add_cell(GridPoint point, CellContent content) {
    if (!in_grid(point)) {
        throw LoadError("cell outside the grid", name_);
    }
    Cell cell{CellAddress{name_, point.column, point.row}, std::move(content)};
    auto [it, inserted] = cells_.emplace(Key{point.row, point.column}, std::move(cell));
    if (!inserted) {
        throw LoadError("duplicate cell " + render_cell(point), name_);
    }
}

const Cell* Sheet::find(GridPoint point) const {
    auto it = cells_.find(Key{point.row, point.column});
    return it == cells_.end() ? nullptr : &it->second;
}

Workbook::Workbook(std::vector<Sheet> sheets) : sheets_(std::move(sheets)) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < sheets_.size(); ++i) {
        if (!seen.insert(fold_sheet_name(sheets_[i].name())).second) {
            throw LoadError("duplicate sheet name '" + sheets_[i].name() + "'",
                            "sheets[" + std::to_string(i) + "]");
        }
    }
}

const Sheet* Workbook::find_sheet(std::string_view name) const noexcept {
    for (const auto& sheet : sheets_) {
        if (sheet_names_equal(sheet.name(), name)) {
            return &sheet;
        }
    }
    return nullptr;
}

std::size_t Workbook::sheet_ordinal(std::string_view name) const {
    for (std::size_t i = 0; i < sheets_.size(); ++i) {
        if (sheet_names_equal(sheets_[i].name(), name)) {
            return i + 1;
        }
    }
    throw UnknownSheetError(std::string(name));
}

const std::string& Workbook::canonical_sheet_name(std::string_view name) const {
    if (const auto* sheet = find_sheet(name)) {
        return sheet->name();
    }
    throw UnknownSheetError(std::string(name));
}

const Cell* Workbook::find_cell(const CellAddress& address) const {
    const auto* sheet = find_sheet(address.sheet);
    return sheet ? sheet->find(address.point()) : nullptr;
}

std::vector<const Cell*> Workbook::formula_cells() const {
    std::vector<const Cell*> cells;
    for (const auto& sheet : sheets_) {
        sheet.for_each_cell([&](const Cell& cell) {
            if (cell.is_formula()) {
                cells.push_back(&cell);
            }
        });
    }
    return cells;
}

std::string normalize_formula(std::string_view text) {
    if (!text.empty() && text.front() == '=') {
        text.remove_prefix(1);
    }
    return std::string(text);
}

namespace {

CellContent read_content(const json& spec, const std::string& location) {
    if (!spec.is_object()) {
        throw LoadError("cell must be an object with \"value\" or \"formula\"", location);
    }
    const bool has_value = spec.contains("value");
    const bool has_formula = spec.contains("formula");
    if (has_value == has_formula) {
        throw LoadError("cell must have exactly one of \"value\" or \"formula\"", location);
    }
    if (spec.size() != 1) {
        throw LoadError("unexpected key in cell object", location);
    }
    if (has_formula) {
        const auto& f = spec["formula"];
        if (!f.is_string()) {
            throw LoadError("\"formula\" must be a string", location);
        }
        std::string text = normalize_formula(f.get<std::string>());
        if (text.empty()) {
            throw LoadError("empty formula", location);
        }
        return FormulaText{std::move(text)};
    }
    const auto& v = spec["value"];
    if (v.is_boolean()) {
        return v.get<bool>();
    }
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    throw LoadError("\"value\" must be a number, string or boolean", location);
}

}  // namespace

Workbook load_workbook(std::string_view document) {
    // nlohmann keeps the last of two equal keys; reject them instead.
    std::vector<std::set<std::string>> open_objects;
    const json::parser_callback_t reject_duplicate_keys =
        [&](int /*depth*/, json::parse_event_t event, json& parsed) {
            switch (event) {
            case json::parse_event_t::object_start:
                open_objects.emplace_back();
                break;
            case json::parse_event_t::object_end:
                open_objects.pop_back();
                break;
            case json::parse_event_t::key:
                if (!open_objects.back().insert(parsed.get<std::string>()).second) {
                    throw LoadError("duplicate key \"" + parsed.get<std::string>() + "\"",
                                    "document");
                }
                break;
            default:
                break;
            }
            return true;
        };

    json root;
    try {
        root = json::parse(document, reject_duplicate_keys);
    } catch (const json::parse_error& e) {
        throw LoadError(std::string("malformed JSON (") + e.what() + ")",
                        "byte " + std::to_string(e.byte));
    }
    if (!root.is_object() || !root.contains("sheets") || !root["sheets"].is_array()) {
        throw LoadError("document must be an object with a \"sheets\" array", "$");
    }

    std::vector<Sheet> sheets;
    const auto& sheet_list = root["sheets"];
    for (std::size_t i = 0; i < sheet_list.size(); ++i) {
        const std::string where = "sheets[" + std::to_string(i) + "]";
        const auto& spec = sheet_list[i];
        if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string()) {
            throw LoadError("sheet must have a string \"name\"", where);
        }
        const auto name = spec["name"].get<std::string>();
        if (name.empty()) {
            throw LoadError("sheet name must not be empty", where);
        }
        Sheet sheet(name);
        if (spec.contains("cells")) {
            const auto& cells = spec["cells"];
            if (!cells.is_object()) {
                throw LoadError("\"cells\" must be an object", where);
            }
            for (const auto& [key, cell_spec] : cells.items()) {
                const std::string location = where + ".cells[\"" + key + "\"]";
                if (key.find('!') != std::string::npos) {
                    throw LoadError("cell keys must be unqualified A1 addresses", location);
                }
                CellAddress address;
                try {
                    address = parse_address(key, name);
                } catch (const AddressError& e) {
                    throw LoadError(e.what(), location);
                }
                if (sheet.find(address.point()) != nullptr) {
                    throw LoadError("duplicate cell address", location);
                }
                sheet.add_cell(address.point(), read_content(cell_spec, location));
            }
        }
        sheets.push_back(std::move(sheet));
    }
    return Workbook(std::move(sheets));
}

Workbook load_workbook_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LoadError("cannot open file", path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_workbook(buffer.str());
}

std::string dump_workbook(const Workbook& workbook) {
    json sheets = json::array();
    for (const auto& sheet : workbook.sheets()) {
        json cells = json::object();
        sheet.for_each_cell([&](const Cell& cell) {
            json spec;
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, FormulaText>) {
                        spec["formula"] = v.source;
                    } else if constexpr (std::is_same_v<T, std::monostate>) {
                        spec["value"] = "";
                    } else {
                        spec["value"] = v;
                    }
                },
                cell.content);
            cells[render_cell(cell.address.point())] = std::move(spec);
        });
        sheets.push_back({{"name", sheet.name()}, {"cells", std::move(cells)}});
    }
    return json{{"sheets", std::move(sheets)}}.dump(2);
}

}  // namespace sheetmetrics
