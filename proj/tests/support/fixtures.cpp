#include "fixtures.hpp"

#include "sheetmetrics/formula.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace testing_support {

using namespace sheetmetrics;

std::filesystem::path fixture_path(const std::string& relative) {
    return std::filesystem::path(SHEETMETRICS_FIXTURE_DIR) / relative;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// clang-format off
const std::array<PublishedRow, 15> kPublishedMetrics{{
    { 1, "Sheet1", "D29", { 7,  7, 0, 4, 1,  28, 0,  71,  28}},
    { 2, "Output", "D4",  { 5,  5, 1, 5, 3, 100, 0,   0, 100}},
    { 3, "Sheet1", "C17", { 4,  4, 0, 4, 4,   0, 0, 100,   0}},
    { 4, "Sheet1", "N38", { 7,  1, 0, 1, 1,   0, 0, 100,   0}},
    { 5, "Sheet1", "D21", { 2,  1, 0, 1, 3,   0, 0, 100,   0}},
    { 6, "Sheet1", "N42", { 2,  1, 0, 1, 1,   0, 0, 100,   0}},
    { 7, "Sheet1", "G16", { 2,  2, 0, 1, 2,   0, 0, 100,   0}},
    { 8, "Sheet1", "C46", { 4,  4, 0, 1, 8,   0, 0, 100,  25}},
    { 9, "Sheet1", "D40", { 2,  2, 0, 1, 6,   0, 0, 100,   0}},
    {10, "Sheet1", "F18", { 8,  1, 0, 1, 1,   0, 0, 100,   0}},
    {11, "Sheet1", "F33", { 2,  2, 0, 1, 3,   0, 0, 100,   0}},
    {12, "Sheet1", "D94", {41,  1, 0, 1, 3,   0, 2,   0,  48}},
    {13, "Sheet1", "E11", { 2,  2, 1, 2, 2,   0, 100, 0,   0}},
    {14, "Sheet1", "E47", {18, 18, 1, 6, 5,  38, 0,   0,   0}},
    {15, "Sheet1", "C41", { 8,  8, 1, 4, 2,  50, 0,  50,   0}},
}};
// clang-format on

Workbook load_formula_fixture(int id) {
    char name[32];
    std::snprintf(name, sizeof name, "formulas/f%02d.json", id);
    return load_workbook_file(fixture_path(name));
}

std::string shift_formula(const std::string& formula, int dcol, int drow) {
    std::string out;
    std::size_t copied = 0;
    for (const auto& token : tokenize(formula)) {
        if (token.kind != TokenKind::Reference) {
            continue;
        }
        out.append(formula, copied, token.offset - copied);
        RefTarget target;
        target.sheet = token.sheet;
        target.start = token.cell;
        target.start.point.column += dcol;
        target.start.point.row += drow;
        target.end = target.start;
        if (token.sheet) {
            // keep the qualifier exactly as written
            const auto bang = formula.rfind('!', token.offset + token.length - 1);
            out.append(formula, token.offset, bang + 1 - token.offset);
            target.sheet.reset();
        }
        out += render_ref(target);
        copied = token.offset + token.length;
    }
    out.append(formula, copied, std::string::npos);
    return out;
}

Workbook shift_workbook(const Workbook& workbook, int dcol, int drow) {
    std::vector<Sheet> sheets;
    for (const auto& sheet : workbook.sheets()) {
        Sheet shifted(sheet.name());
        sheet.for_each_cell([&](const Cell& cell) {
            CellContent content = cell.content;
            if (auto* f = std::get_if<FormulaText>(&content)) {
                f->source = shift_formula(f->source, dcol, drow);
            }
            shifted.add_cell({cell.address.column + dcol, cell.address.row + drow},
                             std::move(content));
        });
        sheets.push_back(std::move(shifted));
    }
    return Workbook(std::move(sheets));
}

namespace {

int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string random_cell(std::mt19937& rng) {
    static const char* cols[] = {"A", "B", "C", "D", "$E", "F", "AA", "g"};
    return std::string(cols[pick(rng, 0, 7)]) + (pick(rng, 0, 4) == 0 ? "$" : "") +
           std::to_string(pick(rng, 1, 60));
}

void leaf(std::mt19937& rng, std::vector<std::string>& out) {
    switch (pick(rng, 0, 6)) {
    case 0:
        out.push_back(std::to_string(pick(rng, 0, 999)));
        break;
    case 1:
        out.push_back("0.5");
        break;
    case 2:
        out.push_back("\"t\"\"x\"");
        break;
    case 3:
        out.push_back(pick(rng, 0, 1) ? "TRUE" : "false");
        break;
    case 4:
        out.push_back(random_cell(rng));
        out.push_back(":");
        out.push_back(random_cell(rng));
        break;
    case 5:
        out.push_back("'My Sheet'!" + random_cell(rng));
        break;
    default:
        out.push_back(random_cell(rng));
        break;
    }
}

void expression(std::mt19937& rng, int depth, std::vector<std::string>& out) {
    if (depth <= 0 || pick(rng, 0, 9) < 3) {
        leaf(rng, out);
        return;
    }
    static const char* binary_ops[] = {"+", "-", "*", "/", "^", "&", "=", "<>", "<", ">=", "<="};
    static const char* functions[] = {"SUM", "IF", "LN", "max", "VLOOKUP", "EXP", "CHOOSE"};
    switch (pick(rng, 0, 5)) {
    case 0:
    case 1:
        expression(rng, depth - 1, out);
        out.push_back(binary_ops[pick(rng, 0, 10)]);
        expression(rng, depth - 1, out);
        break;
    case 2:
        out.push_back("-");
        expression(rng, depth - 1, out);
        break;
    case 3:
        out.push_back("(");
        expression(rng, depth - 1, out);
        out.push_back(")");
        if (pick(rng, 0, 3) == 0) {
            out.push_back("%");
        }
        break;
    default: {
        out.push_back(functions[pick(rng, 0, 6)]);
        out.push_back("(");
        const int args = pick(rng, 0, 3);
        for (int a = 0; a < args; ++a) {
            if (a > 0) {
                out.push_back(",");
            }
            if (a == 0 || pick(rng, 0, 4) != 0) {
                expression(rng, depth - 1, out);
            }
        }
        out.push_back(")");
        break;
    }
    }
}

}  // namespace

std::vector<std::string> random_formula_tokens(std::mt19937& rng, int max_depth) {
    std::vector<std::string> tokens;
    expression(rng, max_depth, tokens);
    return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::mt19937* rng) {
    static const char* spaces[] = {"", " ", "  ", "\t", "\n"};
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (rng != nullptr) {
            out += spaces[pick(*rng, 0, 4)];
        }
        out += tokens[i];
    }
    if (rng != nullptr) {
        out += spaces[pick(*rng, 0, 4)];
    }
    return out;
}

RandomDag random_dag_workbook(std::mt19937& rng, int max_formulas) {
    const int formulas = pick(rng, 1, max_formulas);
    const int values = pick(rng, 0, 4);

    // Topological rank -> cell. Formula k may only reference formulas of a
    // lower rank, so the result is acyclic whatever the layout.
    std::vector<std::string> formula_cells;
    std::vector<std::pair<int, int>> slots;
    for (int r = 1; r <= 6; ++r) {
        for (int c = 1; c <= 4; ++c) {
            slots.emplace_back(c, r);
        }
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    for (int k = 0; k < formulas; ++k) {
        formula_cells.push_back(render_cell({slots[k].first, slots[k].second}));
    }
    std::vector<std::string> value_cells;
    for (int k = 0; k < values; ++k) {
        value_cells.push_back(render_cell({slots[formulas + k].first, slots[formulas + k].second}));
    }

    RandomDag dag;
    Sheet sheet("Data");
    for (int k = 0; k < values; ++k) {
        sheet.add_cell({slots[formulas + k].first, slots[formulas + k].second},
                       static_cast<double>(k));
    }
    for (int k = 0; k < formulas; ++k) {
        std::vector<std::string> refs;
        for (int j = 0; j < k; ++j) {
            if (pick(rng, 0, 2) == 0) {
                refs.push_back(formula_cells[j]);
            }
        }
        for (const auto& v : value_cells) {
            if (pick(rng, 0, 3) == 0) {
                refs.push_back(v);
            }
        }
        if (pick(rng, 0, 3) == 0) {
            refs.push_back("H" + std::to_string(pick(rng, 1, 9)));  // empty cell
        }
        std::shuffle(refs.begin(), refs.end(), rng);
        std::string text;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            text += (i == 0 ? "" : (pick(rng, 0, 1) ? "+" : "*")) + refs[i];
        }
        if (text.empty()) {
            text = "1+2";
        } else if (pick(rng, 0, 2) == 0) {
            text = "SUM(" + text + ",1)";
        }
        sheet.add_cell({slots[k].first, slots[k].second}, FormulaText{text});
        auto& truth = dag.references[formula_cells[k]];
        for (const auto& r : refs) {
            truth.push_back(r);
        }
    }
    std::vector<Sheet> sheets;
    sheets.push_back(std::move(sheet));
    dag.workbook = Workbook(std::move(sheets));
    return dag;
}

}  // namespace testing_support
