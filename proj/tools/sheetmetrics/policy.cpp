#include "sheetmetrics/policy.hpp"

#include "sheetmetrics/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <array>
#include <cmath>

namespace sheetmetrics::cli {

namespace {

using Kind = ThresholdPolicy::Kind;

struct MetricRule {
    std::string_view name;
    Kind kind;
};

constexpr std::array<MetricRule, 9> kRules{{
    {"m1_1", Kind::Max},
    {"m1_2", Kind::Max},
    {"m1_3", Kind::Flag},
    {"m1_4", Kind::Max},
    {"m1_5", Kind::Max},
    {"m2_1", Kind::Max},
    {"m2_2", Kind::Min},
    {"m2_3", Kind::Min},
    {"m2_4", Kind::Max},
}};

std::string_view kind_key(Kind kind) {
    switch (kind) {
    case Kind::Max:
        return "max";
    case Kind::Min:
        return "min";
    case Kind::Flag:
        return "flag";
    }
    return "";
}

std::string format_bound(double v) {
    return fmt::format("{}", v);
}

}  // namespace

ThresholdPolicy parse_policy(std::string_view document) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("policy is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw InputError("policy must be a JSON object");
    }

    ThresholdPolicy policy;
    for (const auto& [name, spec] : root.items()) {
        const auto* rule = [&]() -> const MetricRule* {
            for (const auto& r : kRules) {
                if (r.name == name) {
                    return &r;
                }
            }
            return nullptr;
        }();
        if (rule == nullptr) {
            throw InputError("unknown metric '" + name + "' in policy");
        }
        const std::string key(kind_key(rule->kind));
        if (!spec.is_object() || spec.size() != 1 || !spec.contains(key)) {
            throw InputError("policy entry '" + name + "' must be {\"" + key + "\": ...}");
        }
        const auto& v = spec[key];
        ThresholdPolicy::Bound bound{rule->kind, 0.0};
        if (rule->kind == Kind::Flag) {
            if (!v.is_boolean()) {
                throw InputError("policy entry '" + name + "' flag must be true or false");
            }
            if (!v.get<bool>()) {
                continue;
            }
        } else {
            if (!v.is_number()) {
                throw InputError("policy bound for '" + name + "' must be a number");
            }
            bound.value = v.get<double>();
            if (!std::isfinite(bound.value) || bound.value < 0) {
                throw InputError("policy bound for '" + name + "' must be nonnegative");
            }
        }
        policy.bounds.emplace(name, bound);
    }
    if (policy.bounds.empty()) {
        throw InputError("policy sets no bounds");
    }
    return policy;
}

std::vector<Violation> check_policy(const ThresholdPolicy& policy, const FormulaMetrics& m,
                                    bool paper_compat) {
    std::vector<Violation> out;
    auto count = [&](std::string_view name, std::size_t value) {
        auto it = policy.bounds.find(std::string(name));
        if (it == policy.bounds.end()) {
            return;
        }
        const auto& b = it->second;
        const double v = static_cast<double>(value);
        if (b.kind == Kind::Max && v > b.value) {
            out.push_back({std::string(name), std::to_string(value), "<=" + format_bound(b.value)});
        } else if (b.kind == Kind::Flag && value != 0) {
            out.push_back({std::string(name), std::to_string(value), "=0"});
        }
    };
    auto share = [&](std::string_view name, const Percentage& p) {
        auto it = policy.bounds.find(std::string(name));
        if (it == policy.bounds.end() || !p.defined()) {
            return;
        }
        const auto& b = it->second;
        const double v = p.value();
        if (b.kind == Kind::Max && v > b.value) {
            out.push_back({std::string(name), p.format(paper_compat), "<=" + format_bound(b.value)});
        } else if (b.kind == Kind::Min && v < b.value) {
            out.push_back({std::string(name), p.format(paper_compat), ">=" + format_bound(b.value)});
        }
    };
    count("m1_1", m.m1_1);
    count("m1_2", m.m1_2);
    count("m1_3", static_cast<std::size_t>(m.m1_3));
    count("m1_4", m.m1_4);
    count("m1_5", m.m1_5);
    share("m2_1", m.m2_1);
    share("m2_2", m.m2_2);
    share("m2_3", m.m2_3);
    share("m2_4", m.m2_4);
    return out;
}

}  // namespace sheetmetrics::cli
