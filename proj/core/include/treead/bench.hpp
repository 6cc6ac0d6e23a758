#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treead/dataset.hpp"
#include "treead/detect.hpp"
#include "treead/metrics.hpp"

namespace treead {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DatasetEntry {
    std::string name;
    std::optional<std::filesystem::path> path;
    std::optional<std::string> label_column;
    std::optional<SyntheticSpec> synthetic;
    SplitOptions split;
};

struct AlgorithmEntry {
    std::string name;  // report label; defaults to the algorithm name
    Algorithm algorithm = Algorithm::MGBTAI;
    AlgorithmParams params;
};

struct BenchConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<AlgorithmEntry> algorithms;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    std::chrono::duration<double> timeout{120.0};
    std::filesystem::path output_dir{"bench-out"};
    std::size_t workers = 1;

    void validate() const;
};

/// Parses the JSON config schema documented in the README. Unknown keys are
/// rejected. Relative dataset paths resolve against base_dir.
BenchConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
BenchConfig load_config(const std::filesystem::path& path);

enum class CellStatus { Ok, NaTimeout, Error };

std::string_view to_string(CellStatus status) noexcept;
std::optional<CellStatus> parse_status(std::string_view text);

struct BenchRow {
    std::string dataset;
    std::string algorithm;
    std::uint64_t seed = 0;
    MetricBundle metrics;
    double wall_time_ms = 0.0;
    CellStatus status = CellStatus::Ok;
    std::string message;
    /// Which output fed the AUC: "score" or "prediction".
    std::string auc_basis = "score";
};

struct BenchReport {
    std::string generator{"mt19937_64"};
    std::vector<BenchRow> rows;

    bool has_errors() const noexcept;
};

/// Every (dataset, algorithm, seed) cell, in config order regardless of the
/// worker count. Dataset load failures become error rows.
BenchReport run_benchmark(const BenchConfig& config);

enum class Metric { Precision, Recall, F1, AucRoc };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view name);
double metric_value(const MetricBundle& m, Metric metric) noexcept;

/// Per-dataset winners: every algorithm whose seed-averaged metric equals the
/// best value at 4-decimal precision gets one credit. Non-ok rows are ignored.
std::map<std::string, std::size_t> winner_tally(const BenchReport& report, Metric metric);

struct RunSpread {
    std::string dataset;
    std::string algorithm;
    std::size_t runs = 0;
    double mean = 0.0;
    std::optional<double> stddev;  // needs two or more ok runs
};

/// Mean and sample standard deviation of a metric across seeds.
std::vector<RunSpread> run_spread(const BenchReport& report, Metric metric);

enum class ReportFormat { Csv, Json, Markdown };

std::string render_report(const BenchReport& report, ReportFormat format,
                          bool include_timing = true);
void emit_report(const BenchReport& report, ReportFormat format, const std::filesystem::path& path);

/// Reads back the CSV written by emit_report.
BenchReport read_report_csv(const std::filesystem::path& path);

}  // namespace treead
