#include "sheetmetrics/dependency_graph.hpp"
#include "sheetmetrics/formula.hpp"
#include "sheetmetrics/metrics.hpp"
#include "sheetmetrics/stats.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

using namespace sheetmetrics;

namespace {

const char* const kLongFormula =
    "(((EXP((0-G36)*C36))*C34*C42-C35*(EXP((0-G34)*C36))*C45)-((EXP((0-G36)*C36))*C34*F42-"
    "C38*(EXP((0-G34)*C36))*F45))*C37/G37";

void BM_ParseFormula(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_formula(kLongFormula));
    }
}
BENCHMARK(BM_ParseFormula);

// Column A holds a chain A1 <- A2 <- ... <- An.
Workbook chain_workbook(int length) {
    Sheet sheet("S");
    sheet.add_cell({1, 1}, 1.0);
    for (int row = 2; row <= length; ++row) {
        sheet.add_cell({1, row}, FormulaText{"A" + std::to_string(row - 1) + "+B" + std::to_string(row)});
        sheet.add_cell({2, row}, static_cast<double>(row));
    }
    std::vector<Sheet> sheets;
    sheets.push_back(std::move(sheet));
    return Workbook(std::move(sheets));
}

void BM_ChainLengths(benchmark::State& state) {
    const auto wb = chain_workbook(static_cast<int>(state.range(0)));
    const auto graph = build_graph(wb);
    for (auto _ : state) {
        ChainLengths lengths(graph);
        benchmark::DoNotOptimize(lengths.at(graph.size() - 1));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChainLengths)->Range(64, 1 << 16)->Complexity();

void BM_AnalyzeWorkbook(benchmark::State& state) {
    const auto wb = chain_workbook(static_cast<int>(state.range(0)));
    const MetricsConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_workbook(wb, config));
    }
}
BENCHMARK(BM_AnalyzeWorkbook)->Range(64, 1 << 12);

void BM_Spearman(benchmark::State& state) {
    std::mt19937 rng(1);
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<double>(rng() % 100);
        y[i] = static_cast<double>(rng() % 100);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(spearman_rho(x, y));
    }
}
BENCHMARK(BM_Spearman)->Range(16, 1 << 14);

}  // namespace
BENCHMARK_MAIN();
