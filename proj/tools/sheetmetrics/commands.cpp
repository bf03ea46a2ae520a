#include "sheetmetrics/commands.hpp"

#include "sheetmetrics/csv.hpp"
#include "sheetmetrics/errors.hpp"
#include "sheetmetrics/policy.hpp"
#include "sheetmetrics/stats.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace sheetmetrics::cli {

namespace {

constexpr std::array<std::string_view, 9> kMetricColumns{"m1_1", "m1_2", "m1_3", "m1_4", "m1_5",
                                                         "m2_1", "m2_2", "m2_3", "m2_4"};

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        return std::nullopt;
    }
    return buffer.str();
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    return std::string(s.substr(first, s.find_last_not_of(" \t") - first + 1));
}

double parse_number(const std::string& text, std::string_view column, std::size_t line) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw InputError(std::string(column) + " is not a number: '" + text + "'", line);
    }
    return v;
}

Field percentage_field(const Percentage& p, bool paper_compat) {
    return paper_compat ? Field::integer(p.truncated()) : Field::decimal(p.format(false));
}

std::vector<Field> metric_fields(const FormulaMetrics& m, bool paper_compat) {
    return {
        Field::integer(static_cast<long long>(m.m1_1)),
        Field::integer(static_cast<long long>(m.m1_2)),
        Field::integer(m.m1_3),
        Field::integer(static_cast<long long>(m.m1_4)),
        Field::integer(static_cast<long long>(m.m1_5)),
        percentage_field(m.m2_1, paper_compat),
        percentage_field(m.m2_2, paper_compat),
        percentage_field(m.m2_3, paper_compat),
        percentage_field(m.m2_4, paper_compat),
    };
}

void report_build_error(const BuildError& e, std::ostream& err) {
    for (const auto& d : e.diagnostics()) {
        err << "error: " << render_address(d.cell) << ": " << d.message << '\n';
    }
}

// Loads the workbook and resolves --formula selections; nullopt after
// printing a diagnostic.
struct LoadedWorkbook {
    Workbook workbook;
    std::vector<CellAddress> selection;
};

std::optional<LoadedWorkbook> load_for_analysis(const std::filesystem::path& path,
                                                const std::vector<std::string>& formulas,
                                                std::ostream& err) {
    const auto text = read_file(path);
    if (!text) {
        err << "error: cannot read workbook '" << path.string() << "'\n";
        return std::nullopt;
    }
    LoadedWorkbook loaded;
    try {
        loaded.workbook = load_workbook(*text);
    } catch (const LoadError& e) {
        err << "error: " << path.string() << ": " << e.what() << '\n';
        return std::nullopt;
    }
    const std::string default_sheet =
        loaded.workbook.sheets().empty() ? std::string() : loaded.workbook.sheets().front().name();
    for (const auto& spec : formulas) {
        try {
            CellAddress address = parse_address(spec, default_sheet);
            address.sheet = loaded.workbook.canonical_sheet_name(address.sheet);
            const Cell* cell = loaded.workbook.find_cell(address);
            if (cell == nullptr || !cell->is_formula()) {
                err << "error: --formula " << spec << " is not a formula cell\n";
                return std::nullopt;
            }
            loaded.selection.push_back(std::move(address));
        } catch (const Error& e) {
            err << "error: --formula " << spec << ": " << e.what() << '\n';
            return std::nullopt;
        }
    }
    return loaded;
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
    try {
        options.config.validate();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kInputError;
    }
    auto loaded = load_for_analysis(options.workbook, options.formulas, err);
    if (!loaded) {
        return exit_code::kInputError;
    }

    std::vector<FormulaReport> reports;
    try {
        reports = analyze_workbook(loaded->workbook, options.config, loaded->selection);
    } catch (const BuildError& e) {
        report_build_error(e, err);
        return exit_code::kAnalysisError;
    }

    Table table;
    table.header = {"sheet", "cell", "formula"};
    table.header.insert(table.header.end(), kMetricColumns.begin(), kMetricColumns.end());
    for (const auto& r : reports) {
        if (!r.metrics.has_references()) {
            err << "note: " << render_address(r.cell)
                << " has no references; placement percentages are reported as 0\n";
        }
        std::vector<Field> row{Field::str(r.cell.sheet), Field::str(render_cell(r.cell.point())),
                               Field::str(r.formula)};
        auto metrics = metric_fields(r.metrics, options.config.paper_compat);
        row.insert(row.end(), metrics.begin(), metrics.end());
        table.rows.push_back(std::move(row));
    }
    write_table(out, table, options.format);
    return exit_code::kSuccess;
}

int cmd_flag(const FlagOptions& options, std::ostream& out, std::ostream& err) {
    try {
        options.config.validate();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kInputError;
    }
    const auto policy_text = read_file(options.policy);
    if (!policy_text) {
        err << "error: cannot read policy '" << options.policy.string() << "'\n";
        return exit_code::kInputError;
    }
    ThresholdPolicy policy;
    try {
        policy = parse_policy(*policy_text);
    } catch (const InputError& e) {
        err << "error: " << options.policy.string() << ": " << e.what() << '\n';
        return exit_code::kInputError;
    }
    auto loaded = load_for_analysis(options.workbook, {}, err);
    if (!loaded) {
        return exit_code::kInputError;
    }
    std::vector<FormulaReport> reports;
    try {
        reports = analyze_workbook(loaded->workbook, options.config);
    } catch (const BuildError& e) {
        report_build_error(e, err);
        return exit_code::kAnalysisError;
    }

    Table table;
    table.header = {"sheet", "cell", "metric", "value", "bound"};
    for (const auto& r : reports) {
        for (const auto& v : check_policy(policy, r.metrics, options.config.paper_compat)) {
            table.rows.push_back({Field::str(r.cell.sheet),
                                  Field::str(render_cell(r.cell.point())), Field::str(v.metric),
                                  Field::decimal(v.value), Field::str(v.bound)});
        }
    }
    write_table(out, table, options.format);
    return table.rows.empty() ? exit_code::kSuccess : exit_code::kPolicyViolation;
}

int cmd_medians(const std::filesystem::path& scores, Format format, std::ostream& out,
                std::ostream& err) {
    const auto text = read_file(scores);
    if (!text) {
        err << "error: cannot read scores '" << scores.string() << "'\n";
        return exit_code::kInputError;
    }
    std::vector<MedianRow> rows;
    try {
        rows = score_medians(parse_scores_csv(*text));
    } catch (const InputError& e) {
        err << "error: " << scores.string() << ": " << e.what() << '\n';
        return exit_code::kInputError;
    }
    Table table;
    table.header = {"formula_id", "u1", "u2", "u3"};
    for (const auto& r : rows) {
        std::vector<Field> row{Field::str(r.formula_id)};
        for (double m : r.medians) {
            row.push_back(Field::decimal(fmt::format("{}", m)));
        }
        table.rows.push_back(std::move(row));
    }
    write_table(out, table, format);
    return exit_code::kSuccess;
}

namespace {

std::map<std::string, std::size_t> column_index(const csv::Record& header) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        index.emplace(trim(header.fields[i]), i);
    }
    return index;
}

const std::string& field_at(const csv::Record& rec, std::size_t i) {
    if (i >= rec.fields.size()) {
        throw InputError("missing field", rec.line);
    }
    return rec.fields[i];
}

// Metric rows as printed by `analyze`. The id is the formula_id column when
// present, otherwise SHEET!CELL.
std::vector<MetricSample> read_metric_samples(const std::string& text) {
    const auto records = csv::parse(text);
    if (records.empty()) {
        throw InputError("empty metrics file");
    }
    const auto index = column_index(records.front());
    for (auto name : kMetricColumns) {
        if (!index.contains(std::string(name))) {
            throw InputError("metrics header lacks column " + std::string(name),
                             records.front().line);
        }
    }
    const bool has_id = index.contains("formula_id");
    if (!has_id && !(index.contains("sheet") && index.contains("cell"))) {
        throw InputError("metrics header needs formula_id or sheet and cell columns",
                         records.front().line);
    }
    std::vector<MetricSample> samples;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        MetricSample s;
        if (has_id) {
            s.formula_id = trim(field_at(rec, index.at("formula_id")));
        } else {
            s.formula_id = trim(field_at(rec, index.at("sheet"))) + "!" +
                           trim(field_at(rec, index.at("cell")));
        }
        for (std::size_t j = 0; j < kMetricColumns.size(); ++j) {
            const auto col = index.at(std::string(kMetricColumns[j]));
            s.values[j] = parse_number(field_at(rec, col), kMetricColumns[j], rec.line);
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

std::vector<MedianRow> read_median_rows(const std::string& text) {
    const auto records = csv::parse(text);
    if (records.empty()) {
        throw InputError("empty medians file");
    }
    const auto index = column_index(records.front());
    for (auto name : {"formula_id", "u1", "u2", "u3"}) {
        if (!index.contains(name)) {
            throw InputError(std::string("medians header lacks column ") + name,
                             records.front().line);
        }
    }
    std::vector<MedianRow> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        MedianRow row;
        row.formula_id = trim(field_at(rec, index.at("formula_id")));
        const std::array<const char*, 3> names{"u1", "u2", "u3"};
        for (std::size_t k = 0; k < 3; ++k) {
            row.medians[k] = parse_number(field_at(rec, index.at(names[k])), names[k], rec.line);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_rho(const CorrelationCell& cell) {
    if (!cell.rho) {
        return "NA";
    }
    std::string text = fmt::format("{:.3f}", *cell.rho);
    if (text == "-0.000") {
        text = "0.000";
    }
    return text + std::string(significance_mark(cell.significance));
}

}  // namespace

int cmd_correlate(const std::filesystem::path& metrics, const std::filesystem::path& medians,
                  Format format, std::ostream& out, std::ostream& err) {
    const auto metrics_text = read_file(metrics);
    if (!metrics_text) {
        err << "error: cannot read metrics '" << metrics.string() << "'\n";
        return exit_code::kInputError;
    }
    const auto medians_text = read_file(medians);
    if (!medians_text) {
        err << "error: cannot read medians '" << medians.string() << "'\n";
        return exit_code::kInputError;
    }

    CorrelationMatrix matrix;
    try {
        const auto samples = read_metric_samples(*metrics_text);
        const auto rows = read_median_rows(*medians_text);
        matrix = correlation_matrix(samples, rows);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kInputError;
    }

    Table table;
    table.header = {"measure"};
    for (auto label : kMetricLabels) {
        table.header.emplace_back(label);
    }
    for (std::size_t i = 0; i < kMeasureLabels.size(); ++i) {
        std::vector<Field> row{Field::str(std::string(kMeasureLabels[i]))};
        for (const auto& cell : matrix[i]) {
            row.push_back(Field::str(format_rho(cell)));
        }
        table.rows.push_back(std::move(row));
    }
    write_table(out, table, format);
    return exit_code::kSuccess;
}

namespace {

struct ConfigFlags {
    bool paper_compat = false;
    std::optional<int> row_threshold;
    std::optional<int> col_threshold;
    std::optional<std::string> conditional_functions;
};

void add_config_flags(CLI::App& command, ConfigFlags& flags) {
    command.add_flag("--paper-compat", flags.paper_compat,
                     "Truncated integer percentages and a distant-row threshold of 20");
    command.add_option("--row-threshold", flags.row_threshold,
                       "Rows beyond which a reference is distant (default 25)");
    command.add_option("--col-threshold", flags.col_threshold,
                       "Columns beyond which a reference is distant (default 10)");
    command.add_option("--conditional-functions", flags.conditional_functions,
                       "Comma-separated function names that count as conditional");
}

MetricsConfig make_config(const ConfigFlags& flags) {
    MetricsConfig config = flags.paper_compat ? MetricsConfig::paper_compatible() : MetricsConfig{};
    if (flags.row_threshold) {
        config.distant_row_threshold = *flags.row_threshold;
    }
    if (flags.col_threshold) {
        config.distant_col_threshold = *flags.col_threshold;
    }
    if (flags.conditional_functions) {
        config.conditional_functions.clear();
        std::stringstream names(*flags.conditional_functions);
        std::string name;
        while (std::getline(names, name, ',')) {
            name = trim(name);
            std::transform(name.begin(), name.end(), name.begin(),
                           [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            if (!name.empty()) {
                config.conditional_functions.insert(name);
            }
        }
    }
    return config;
}

const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Formula understandability metrics for spreadsheets", "sheetmetrics"};
    app.require_subcommand(1);

    Format format = Format::Csv;
    auto add_format = [&](CLI::App& command) {
        command.add_option("--format", format, "Output format: csv or json")
            ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    };

    AnalyzeOptions analyze;
    ConfigFlags analyze_flags;
    auto* analyze_cmd = app.add_subcommand("analyze", "Metric report for every formula cell");
    analyze_cmd->add_option("workbook", analyze.workbook, "Workbook in canonical JSON")->required();
    analyze_cmd->add_option("--formula", analyze.formulas,
                            "Restrict to SHEET!CELL (repeatable)");
    add_config_flags(*analyze_cmd, analyze_flags);
    add_format(*analyze_cmd);

    FlagOptions flag;
    ConfigFlags flag_flags;
    auto* flag_cmd = app.add_subcommand("flag", "List formulas that break a threshold policy");
    flag_cmd->add_option("workbook", flag.workbook, "Workbook in canonical JSON")->required();
    flag_cmd->add_option("policy", flag.policy, "Policy JSON")->required();
    add_config_flags(*flag_cmd, flag_flags);
    add_format(*flag_cmd);

    std::filesystem::path scores;
    auto* medians_cmd = app.add_subcommand("medians", "Per-formula medians of U1..U3 scores");
    medians_cmd->add_option("scores", scores, "Score CSV")->required();
    add_format(*medians_cmd);

    std::filesystem::path metrics_path;
    std::filesystem::path medians_path;
    auto* correlate_cmd =
        app.add_subcommand("correlate", "Spearman correlation of metrics against score medians");
    correlate_cmd->add_option("metrics", metrics_path, "Metrics CSV from analyze")->required();
    correlate_cmd->add_option("medians", medians_path, "Medians CSV from medians")->required();
    add_format(*correlate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::kSuccess;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_code::kSuccess;
        }
        err << "error: " << e.what() << '\n';
        return exit_code::kInputError;
    }

    if (analyze_cmd->parsed()) {
        analyze.config = make_config(analyze_flags);
        analyze.format = format;
        return cmd_analyze(analyze, out, err);
    }
    if (flag_cmd->parsed()) {
        flag.config = make_config(flag_flags);
        flag.format = format;
        return cmd_flag(flag, out, err);
    }
    if (medians_cmd->parsed()) {
        return cmd_medians(scores, format, out, err);
    }
    return cmd_correlate(metrics_path, medians_path, format, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    argv.push_back(nullptr);
    return run(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace sheetmetrics::cli
