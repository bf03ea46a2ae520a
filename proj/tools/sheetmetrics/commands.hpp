#pragma once

#include "sheetmetrics/metrics.hpp"
#include "sheetmetrics/report.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace sheetmetrics::cli {

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kAnalysisError = 1;   // parse errors, unknown sheets, cycles
inline constexpr int kInputError = 2;      // unreadable or malformed input, bad flags
inline constexpr int kPolicyViolation = 3;
}  // namespace exit_code

struct AnalyzeOptions {
    std::filesystem::path workbook;
    MetricsConfig config;
    Format format = Format::Csv;
    std::vector<std::string> formulas;  // SHEET!CELL; empty means all
};

struct FlagOptions {
    std::filesystem::path workbook;
    std::filesystem::path policy;
    MetricsConfig config;
    Format format = Format::Csv;
};

// Rows `sheet,cell,formula,m1_1,...,m2_4`, sheet ordinal then row then column.
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);
// Rows `sheet,cell,metric,value,bound`; exit 3 when anything is flagged.
int cmd_flag(const FlagOptions& options, std::ostream& out, std::ostream& err);
// Rows `formula_id,u1,u2,u3` of per-formula medians.
int cmd_medians(const std::filesystem::path& scores, Format format, std::ostream& out,
                std::ostream& err);
// Rows U1..U3 by columns M1.1..M2.4: rho to 3 decimals plus "*"/"**", or NA.
int cmd_correlate(const std::filesystem::path& metrics, const std::filesystem::path& medians,
                  Format format, std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sheetmetrics::cli
