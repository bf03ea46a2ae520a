#pragma once

#include "sheetmetrics/metrics.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sheetmetrics::cli {

// Upper bounds for counts and for the reverse/distant shares, lower bounds for
// the same-row/same-column shares, and a flag for conditional use.
struct ThresholdPolicy {
    enum class Kind { Max, Min, Flag };

    struct Bound {
        Kind kind = Kind::Max;
        double value = 0.0;
    };

    std::map<std::string, Bound> bounds;  // keyed by "m1_1" .. "m2_4"
};

// {"m1_4":{"max":3},"m2_3":{"min":50},"m1_3":{"flag":true}}
// Throws InputError on unknown metrics, a bound kind the metric does not
// accept, negative bounds or an empty policy.
ThresholdPolicy parse_policy(std::string_view document);

struct Violation {
    std::string metric;
    std::string value;  // as printed in reports
    std::string bound;  // "<=3", ">=50", "=0"
};

// Placement shares are skipped for formulas without references.
std::vector<Violation> check_policy(const ThresholdPolicy& policy, const FormulaMetrics& metrics,
                                    bool paper_compat);

}  // namespace sheetmetrics::cli
