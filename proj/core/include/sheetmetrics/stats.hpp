#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sheetmetrics {

inline constexpr std::array<std::string_view, 3> kMeasureLabels{"U1", "U2", "U3"};
inline constexpr std::array<std::string_view, 9> kMetricLabels{
    "M1.1", "M1.2", "M1.3", "M1.4", "M1.5", "M2.1", "M2.2", "M2.3", "M2.4"};

// One participant's rubric scores (1..4) for one formula:
// u1 perceived understandability, u2 explanation, u3 reference finding.
struct ScoreRecord {
    std::string formula_id;
    std::string participant_id;
    int u1 = 0;
    int u2 = 0;
    int u3 = 0;
};

// Header `formula_id,participant_id,u1,u2,u3`. Throws InputError carrying the
// line number for a bad header, a score outside 1..4 or a repeated
// (formula, participant) pair.
std::vector<ScoreRecord> parse_scores_csv(std::string_view text);

struct MedianRow {
    std::string formula_id;
    std::array<double, 3> medians{};  // U1, U2, U3
};

// Per-formula medians across participants, ids in natural order (f2 < f10).
std::vector<MedianRow> score_medians(std::span<const ScoreRecord> records);

// Average of the two middle values for even counts. Throws StatsError when empty.
double median(std::span<const double> values);

// 1-based ranks; ties share the mean of the positions they occupy.
std::vector<double> rank_with_ties(std::span<const double> values);

// Pearson correlation of the tied ranks. Throws StatsError for mismatched
// lengths, n < 3 or a constant input.
double spearman_rho(std::span<const double> x, std::span<const double> y);

enum class Significance { None, FivePercent, OnePercent };

struct SignificanceResult {
    double p_value = 1.0;
    Significance mark = Significance::None;
};

// Two-sided p from t = rho * sqrt((n - 2) / (1 - rho^2)) on n - 2 degrees of
// freedom. "**" at p <= 0.01, "*" at p <= 0.05. Throws StatsError for n < 4.
SignificanceResult significance(double rho, std::size_t n);

// "", "*" or "**".
std::string_view significance_mark(Significance s) noexcept;

struct CorrelationCell {
    std::optional<double> rho;  // nullopt when either column is constant
    std::size_t n = 0;
    double p_value = 1.0;
    Significance significance = Significance::None;
};

// Metric values M1.1..M2.4 of one formula.
struct MetricSample {
    std::string formula_id;
    std::array<double, 9> values{};
};

// [measure][metric]
using CorrelationMatrix = std::array<std::array<CorrelationCell, 9>, 3>;

// Spearman correlation of every (measure, metric) pair over the formulas.
// Both inputs must cover the same ids (n >= 4); row order is irrelevant.
// Throws StatsError listing unmatched ids.
CorrelationMatrix correlation_matrix(std::span<const MetricSample> metrics,
                                     std::span<const MedianRow> medians);

// Orders digit runs numerically: "f2" < "f10".
bool natural_less(std::string_view a, std::string_view b);

}  // namespace sheetmetrics
