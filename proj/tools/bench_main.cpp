// bench: run anomaly detectors, generate synthetic data, score benchmark reports.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 run finished with
// error rows.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "treead/bench.hpp"
#include "treead/dataset.hpp"
#include "treead/detect.hpp"
#include "treead/metrics.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPartialFailure = 2;

void print_tally(const treead::BenchReport& report, treead::Metric metric) {
    const auto counts = treead::winner_tally(report, metric);
    std::cout << to_string(metric) << " wins:";
    for (const auto& [algo, wins] : counts) {
        std::cout << ' ' << algo << '=' << wins;
    }
    std::cout << '\n';
}

int cmd_run(const std::string& config_path, std::optional<std::size_t> workers,
            std::optional<double> timeout, std::optional<std::string> output_dir) {
    treead::BenchConfig config;
    try {
        config = treead::load_config(config_path);
        if (workers) config.workers = *workers;
        if (timeout) config.timeout = std::chrono::duration<double>(*timeout);
        if (output_dir) config.output_dir = *output_dir;
        config.validate();
    } catch (const treead::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    const treead::BenchReport report = treead::run_benchmark(config);
    std::filesystem::create_directories(config.output_dir);
    treead::emit_report(report, treead::ReportFormat::Csv, config.output_dir / "report.csv");
    treead::emit_report(report, treead::ReportFormat::Json, config.output_dir / "report.json");
    treead::emit_report(report, treead::ReportFormat::Markdown, config.output_dir / "report.md");

    std::size_t ok = 0, na = 0, err = 0;
    for (const auto& row : report.rows) {
        switch (row.status) {
        case treead::CellStatus::Ok: ++ok; break;
        case treead::CellStatus::NaTimeout: ++na; break;
        case treead::CellStatus::Error:
            ++err;
            std::cerr << "error: " << row.dataset << " / " << row.algorithm << " seed " << row.seed
                      << ": " << row.message << '\n';
            break;
        }
    }
    std::cout << "cells: " << report.rows.size() << " ok=" << ok << " na-timeout=" << na
              << " error=" << err << '\n'
              << "report: " << (config.output_dir / "report.csv").string() << '\n';
    if (ok > 0) {
        for (auto m : {treead::Metric::Precision, treead::Metric::Recall, treead::Metric::F1,
                       treead::Metric::AucRoc}) {
            print_tally(report, m);
        }
    }
    return report.has_errors() ? kPartialFailure : kOk;
}

int cmd_detect(const std::string& algo_name, const std::string& input,
               const std::optional<std::string>& label_column, std::uint64_t seed,
               const std::string& output) {
    const auto algorithm = treead::parse_algorithm(algo_name);
    if (!algorithm) {
        std::cerr << "unknown algorithm '" << algo_name << "'\n";
        return kConfigError;
    }
    const treead::Dataset dataset = treead::load_csv(input, label_column);
    const treead::DetectionResult result = treead::detect(dataset, *algorithm, seed);

    std::ofstream out(output);
    if (!out) {
        throw std::runtime_error("cannot write '" + output + "'");
    }
    out << "index,score,prediction\n" << std::setprecision(17);
    for (std::size_t i = 0; i < result.scores.size(); ++i) {
        out << i << ',' << result.scores[i] << ',' << static_cast<int>(result.predictions[i])
            << '\n';
    }

    std::size_t flagged = 0;
    for (auto p : result.predictions) flagged += p;
    std::cout << algo_name << ": " << flagged << " of " << dataset.size()
              << " points flagged (threshold " << result.threshold << ")\n";
    if (dataset.has_labels()) {
        const auto m = treead::evaluate(result.scores, result.predictions, *dataset.labels());
        std::cout << std::fixed << std::setprecision(4) << "precision " << m.precision
                  << (m.precision_defined ? "" : " (undefined)") << "  recall " << m.recall
                  << (m.recall_defined ? "" : " (undefined)") << "  f1 " << m.f1 << "  auc_roc "
                  << m.auc_roc << (m.auc_defined ? "" : " (undefined)") << '\n';
    }
    return kOk;
}

int cmd_tally(const std::string& report_path, const std::string& metric_name) {
    const auto metric = treead::parse_metric(metric_name);
    if (!metric) {
        std::cerr << "unknown metric '" << metric_name
                  << "' (expected precision, recall, f1 or auc_roc)\n";
        return kConfigError;
    }
    const auto report = treead::read_report_csv(report_path);
    for (const auto& [algo, wins] : treead::winner_tally(report, *metric)) {
        std::cout << algo << ',' << wins << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree-based and classical anomaly detection benchmark"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a benchmark config and write reports");
    std::string config_path;
    std::optional<std::size_t> workers;
    std::optional<double> timeout;
    std::optional<std::string> output_dir;
    run->add_option("--config", config_path, "JSON benchmark config")->required()->check(CLI::ExistingFile);
    run->add_option("--workers", workers, "Concurrent cells")->check(CLI::PositiveNumber);
    run->add_option("--timeout", timeout, "Per-cell timeout in seconds")->check(CLI::PositiveNumber);
    run->add_option("--output-dir", output_dir, "Override the config's output directory");

    auto* det = app.add_subcommand("detect", "Score every row of a CSV file");
    std::string algo;
    std::string input;
    std::optional<std::string> label_column;
    std::uint64_t seed = 0;
    std::string output;
    det->add_option("--algo", algo, "mgbtai|dbtai|iforest|lof|envelope")
        ->required()
        ->check(CLI::IsMember({"mgbtai", "dbtai", "iforest", "lof", "envelope"}));
    det->add_option("--input", input, "Input CSV with header row")->required()->check(CLI::ExistingFile);
    det->add_option("--label-column", label_column, "Column holding 0/1 ground truth");
    det->add_option("--seed", seed, "Random seed")->required();
    det->add_option("--output", output, "Per-point score/prediction CSV")->required();

    auto* syn = app.add_subcommand("synth", "Generate a labelled synthetic dataset");
    std::string kind;
    std::size_t size = 0;
    std::size_t anomalies = 0;
    std::optional<std::size_t> dims;
    double magnitude = 0.0;
    std::uint64_t syn_seed = 0;
    std::string syn_output;
    syn->add_option("--kind", kind, "uni|multi")->required()->check(CLI::IsMember({"uni", "multi"}));
    syn->add_option("--size", size, "Rows")->required()->check(CLI::PositiveNumber);
    syn->add_option("--anomalies", anomalies, "Planted anomalies")->required();
    syn->add_option("--magnitude", magnitude, "Displacement in base standard deviations")
        ->required()
        ->check(CLI::PositiveNumber);
    syn->add_option("--dims", dims, "Feature count for multi (default 5)")->check(CLI::PositiveNumber);
    syn->add_option("--seed", syn_seed, "Random seed")->required();
    syn->add_option("--output", syn_output, "Output CSV")->required();

    auto* tal = app.add_subcommand("tally", "Count per-dataset wins in a CSV report");
    std::string report_path;
    std::string metric;
    tal->add_option("--report", report_path, "report.csv from `bench run`")->required()->check(CLI::ExistingFile);
    tal->add_option("--metric", metric, "precision|recall|f1|auc_roc")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) {
            return cmd_run(config_path, workers, timeout, output_dir);
        }
        if (*det) {
            return cmd_detect(algo, input, label_column, seed, output);
        }
        if (*syn) {
            treead::SyntheticSpec spec;
            spec.kind = kind == "uni" ? treead::SyntheticKind::UnivariateSeries
                                      : treead::SyntheticKind::MultivariateBlobs;
            spec.size = size;
            spec.dims = kind == "uni" ? 1 : dims.value_or(5);
            spec.anomaly_count = anomalies;
            spec.anomaly_magnitude = magnitude;
            spec.seed = syn_seed;
            treead::write_csv(treead::generate_synthetic(spec), syn_output);
            std::cout << "wrote " << size << " rows to " << syn_output << '\n';
            return kOk;
        }
        if (*tal) {
            return cmd_tally(report_path, metric);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
