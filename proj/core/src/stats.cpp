#include "sheetmetrics/stats.hpp"

#include "sheetmetrics/csv.hpp"
#include "sheetmetrics/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace sheetmetrics {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

int parse_score(const std::string& text, std::string_view column, std::size_t line) {
    if (text.size() != 1 || text[0] < '1' || text[0] > '4') {
        throw InputError(std::string(column) + " must be an integer from 1 to 4, got '" + text +
                             "'",
                         line);
    }
    return text[0] - '0';
}

}  // namespace

bool natural_less(std::string_view a, std::string_view b) {
    auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (digit(a[i]) && digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && digit(a[ie])) {
                ++ie;
            }
            while (je < b.size() && digit(b[je])) {
                ++je;
            }
            auto na = a.substr(i, ie - i);
            auto nb = b.substr(j, je - j);
            na.remove_prefix(std::min(na.find_first_not_of('0'), na.size()));
            nb.remove_prefix(std::min(nb.find_first_not_of('0'), nb.size()));
            if (na.size() != nb.size()) {
                return na.size() < nb.size();
            }
            if (na != nb) {
                return na < nb;
            }
            i = ie;
            j = je;
            continue;
        }
        if (a[i] != b[j]) {
            return a[i] < b[j];
        }
        ++i;
        ++j;
    }
    if ((a.size() - i) != (b.size() - j)) {
        return (a.size() - i) < (b.size() - j);
    }
    return a < b;  // tie-break on leading zeros
}

std::vector<ScoreRecord> parse_scores_csv(std::string_view text) {
    const auto records = csv::parse(text);
    if (records.empty()) {
        throw InputError("empty score file");
    }
    static const std::vector<std::string> kHeader{"formula_id", "participant_id", "u1", "u2",
                                                  "u3"};
    std::vector<std::string> header;
    for (const auto& f : records.front().fields) {
        header.push_back(trim(f));
    }
    if (header != kHeader) {
        throw InputError("header must be formula_id,participant_id,u1,u2,u3",
                         records.front().line);
    }

    std::vector<ScoreRecord> scores;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != 5) {
            throw InputError("expected 5 fields, got " + std::to_string(rec.fields.size()),
                             rec.line);
        }
        ScoreRecord s;
        s.formula_id = trim(rec.fields[0]);
        s.participant_id = trim(rec.fields[1]);
        if (s.formula_id.empty() || s.participant_id.empty()) {
            throw InputError("formula_id and participant_id must not be empty", rec.line);
        }
        s.u1 = parse_score(trim(rec.fields[2]), "u1", rec.line);
        s.u2 = parse_score(trim(rec.fields[3]), "u2", rec.line);
        s.u3 = parse_score(trim(rec.fields[4]), "u3", rec.line);
        if (!seen.emplace(s.formula_id, s.participant_id).second) {
            throw InputError("duplicate score for formula '" + s.formula_id + "', participant '" +
                                 s.participant_id + "'",
                             rec.line);
        }
        scores.push_back(std::move(s));
    }
    return scores;
}

std::vector<MedianRow> score_medians(std::span<const ScoreRecord> records) {
    std::map<std::string, std::array<std::vector<double>, 3>> by_formula;
    for (const auto& r : records) {
        auto& columns = by_formula[r.formula_id];
        columns[0].push_back(r.u1);
        columns[1].push_back(r.u2);
        columns[2].push_back(r.u3);
    }
    std::vector<MedianRow> rows;
    for (const auto& [id, columns] : by_formula) {
        MedianRow row{id, {}};
        for (std::size_t k = 0; k < 3; ++k) {
            row.medians[k] = median(columns[k]);
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const MedianRow& a, const MedianRow& b) {
        return natural_less(a.formula_id, b.formula_id);
    });
    return rows;
}

double median(std::span<const double> values) {
    if (values.empty()) {
        throw StatsError("median of an empty list");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) {
        return sorted[n / 2];
    }
    return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

std::vector<double> rank_with_ties(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) share the mean 1-based rank
        const double shared = (static_cast<double>(i + j) + 2.0) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw StatsError("spearman_rho: inputs differ in length (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
    }
    if (x.size() < 3) {
        throw StatsError("spearman_rho: need at least 3 pairs");
    }
    const auto rx = rank_with_ties(x);
    const auto ry = rank_with_ties(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;  // mean of any tied ranking of n values
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw StatsError("spearman_rho: constant input has no rank correlation");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SignificanceResult significance(double rho, std::size_t n) {
    if (n < 4) {
        throw StatsError("significance: need at least 4 pairs");
    }
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw StatsError("significance: rho must lie in [-1, 1]");
    }
    SignificanceResult result;
    if (std::abs(rho) == 1.0) {
        result.p_value = 0.0;
    } else {
        const double df = static_cast<double>(n - 2);
        const double t2 = rho * rho * df / (1.0 - rho * rho);
        // Two-sided Student-t tail: I_{df/(df+t^2)}(df/2, 1/2).
        result.p_value = boost::math::ibeta(df / 2.0, 0.5, df / (df + t2));
    }
    if (result.p_value <= 0.01) {
        result.mark = Significance::OnePercent;
    } else if (result.p_value <= 0.05) {
        result.mark = Significance::FivePercent;
    }
    return result;
}

std::string_view significance_mark(Significance s) noexcept {
    switch (s) {
    case Significance::OnePercent:
        return "**";
    case Significance::FivePercent:
        return "*";
    case Significance::None:
        break;
    }
    return "";
}

CorrelationMatrix correlation_matrix(std::span<const MetricSample> metrics,
                                     std::span<const MedianRow> medians) {
    std::map<std::string, const MetricSample*> metric_by_id;
    for (const auto& m : metrics) {
        if (!metric_by_id.emplace(m.formula_id, &m).second) {
            throw StatsError("duplicate formula id in metrics: " + m.formula_id);
        }
    }
    std::map<std::string, const MedianRow*> median_by_id;
    for (const auto& m : medians) {
        if (!median_by_id.emplace(m.formula_id, &m).second) {
            throw StatsError("duplicate formula id in medians: " + m.formula_id);
        }
    }

    std::vector<std::string> only_metrics;
    std::vector<std::string> only_medians;
    for (const auto& [id, _] : metric_by_id) {
        if (!median_by_id.contains(id)) {
            only_metrics.push_back(id);
        }
    }
    for (const auto& [id, _] : median_by_id) {
        if (!metric_by_id.contains(id)) {
            only_medians.push_back(id);
        }
    }
    if (!only_metrics.empty() || !only_medians.empty()) {
        auto join = [](const std::vector<std::string>& ids) {
            std::string out;
            for (const auto& id : ids) {
                out += (out.empty() ? "" : ", ") + id;
            }
            return out.empty() ? std::string("(none)") : out;
        };
        throw StatsError("formula ids differ; only in metrics: " + join(only_metrics) +
                         "; only in medians: " + join(only_medians));
    }
    const std::size_t n = metric_by_id.size();
    if (n < 4) {
        throw StatsError("correlation needs at least 4 formulas, got " + std::to_string(n));
    }

    // The maps iterate in id order, so the result does not depend on input order.
    std::array<std::vector<double>, 9> metric_columns;
    std::array<std::vector<double>, 3> measure_columns;
    for (const auto& [id, sample] : metric_by_id) {
        for (std::size_t j = 0; j < 9; ++j) {
            metric_columns[j].push_back(sample->values[j]);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            measure_columns[i].push_back(median_by_id.at(id)->medians[i]);
        }
    }

    auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };

    CorrelationMatrix matrix{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
            CorrelationCell& cell = matrix[i][j];
            cell.n = n;
            if (constant(measure_columns[i]) || constant(metric_columns[j])) {
                cell.p_value = std::nan("");
                continue;
            }
            cell.rho = spearman_rho(measure_columns[i], metric_columns[j]);
            const auto sig = significance(*cell.rho, n);
            cell.p_value = sig.p_value;
            cell.significance = sig.mark;
        }
    }
    return matrix;
}

}  // namespace sheetmetrics
