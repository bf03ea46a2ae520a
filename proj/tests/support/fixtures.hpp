#pragma once

#include "sheetmetrics/workbook.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

std::filesystem::path fixture_path(const std::string& relative);
std::string read_text(const std::filesystem::path& path);

// Published metric values, one row per reference formula:
// M1.1 M1.2 M1.3 M1.4 M1.5 M2.1 M2.2 M2.3 M2.4
struct PublishedRow {
    int id;
    const char* sheet;
    const char* location;
    std::array<long long, 9> values;
};
extern const std::array<PublishedRow, 15> kPublishedMetrics;

sheetmetrics::Workbook load_formula_fixture(int id);

// Moves every cell by (dcol, drow) and rewrites every reference in every
// formula by the same amount. Token-level rewrite: whitespace, literals and
// sheet qualifiers are kept verbatim.
sheetmetrics::Workbook shift_workbook(const sheetmetrics::Workbook& workbook, int dcol, int drow);
std::string shift_formula(const std::string& formula, int dcol, int drow);

// Random well-formed formula as a token list (depth <= max_depth).
std::vector<std::string> random_formula_tokens(std::mt19937& rng, int max_depth);
// Joins tokens, optionally putting random whitespace between them.
std::string join_tokens(const std::vector<std::string>& tokens, std::mt19937* rng = nullptr);

// Acyclic workbook of up to `max_formulas` formula cells plus a few value
// cells, together with the ground-truth direct references of every formula
// (addresses rendered as "A1"; value cells have no entry).
struct RandomDag {
    sheetmetrics::Workbook workbook;
    std::map<std::string, std::vector<std::string>> references;
};
RandomDag random_dag_workbook(std::mt19937& rng, int max_formulas);

}  // namespace testing_support
