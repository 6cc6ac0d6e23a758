#include "treead/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "treead/deadline.hpp"

namespace treead {
namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
    if (!object.is_object()) {
        throw ConfigError(std::string(where) + " must be an object");
    }
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

template <typename T>
T get(const json& object, std::string_view key, std::string_view where) {
    try {
        return object.at(std::string(key)).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + std::string(key) + ": " + e.what());
    }
}

template <typename T>
void read_opt(const json& object, std::string_view key, std::string_view where, T& out) {
    if (object.contains(std::string(key))) {
        out = get<T>(object, key, where);
    }
}

SyntheticSpec parse_synthetic(const json& j, std::string_view where) {
    reject_unknown(j, {"kind", "size", "dims", "anomalies", "magnitude", "seed"}, where);
    SyntheticSpec spec;
    const auto kind = get<std::string>(j, "kind", where);
    if (kind == "uni") {
        spec.kind = SyntheticKind::UnivariateSeries;
        spec.dims = 1;
    } else if (kind == "multi") {
        spec.kind = SyntheticKind::MultivariateBlobs;
        spec.dims = 5;
    } else {
        throw ConfigError(std::string(where) + ".kind must be 'uni' or 'multi'");
    }
    read_opt(j, "size", where, spec.size);
    read_opt(j, "dims", where, spec.dims);
    read_opt(j, "anomalies", where, spec.anomaly_count);
    read_opt(j, "magnitude", where, spec.anomaly_magnitude);
    read_opt(j, "seed", where, spec.seed);
    return spec;
}

DatasetEntry parse_dataset(const json& j, std::size_t index, const std::filesystem::path& base_dir) {
    const std::string where = "datasets[" + std::to_string(index) + "]";
    reject_unknown(j, {"name", "path", "label_column", "synthetic", "train_fraction", "contiguous"},
                   where);
    DatasetEntry entry;
    if (j.contains("path")) {
        std::filesystem::path p = get<std::string>(j, "path", where);
        entry.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (j.contains("synthetic")) {
        entry.synthetic = parse_synthetic(j.at("synthetic"), where + ".synthetic");
    }
    if (entry.path.has_value() == entry.synthetic.has_value()) {
        throw ConfigError(where + " needs exactly one of 'path' or 'synthetic'");
    }
    if (j.contains("label_column")) {
        entry.label_column = get<std::string>(j, "label_column", where);
    }
    read_opt(j, "train_fraction", where, entry.split.fraction);
    read_opt(j, "contiguous", where, entry.split.contiguous);
    if (j.contains("name")) {
        entry.name = get<std::string>(j, "name", where);
    } else if (entry.path) {
        entry.name = entry.path->stem().string();
    } else {
        entry.name = std::string(entry.synthetic->kind == SyntheticKind::UnivariateSeries
                                     ? "synthetic-uni-"
                                     : "synthetic-multi-") +
                     std::to_string(entry.synthetic->seed);
    }
    return entry;
}

void parse_params(const json& p, Algorithm algorithm, AlgorithmParams& params,
                  const std::string& where) {
    switch (algorithm) {
    case Algorithm::MGBTAI:
    case Algorithm::DBTAI: {
        reject_unknown(p, {"min_cluster_frac", "leaf_level", "small_cluster_frac", "split_threshold",
                           "density_weighting"},
                       where);
        TreeParams tree = algorithm == Algorithm::MGBTAI ? TreeParams::mgbtai() : TreeParams::dbtai();
        read_opt(p, "min_cluster_frac", where, tree.min_cluster_frac);
        read_opt(p, "leaf_level", where, tree.leaf_level);
        read_opt(p, "density_weighting", where, tree.density_weighting);
        if (p.contains("small_cluster_frac")) {
            tree.small_cluster_frac = get<double>(p, "small_cluster_frac", where);
        }
        if (p.contains("split_threshold")) {
            tree.split_threshold = get<double>(p, "split_threshold", where);
        }
        try {
            tree.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
        params.tree = tree;
        break;
    }
    case Algorithm::IForest:
        reject_unknown(p, {"n_trees", "subsample", "score_threshold"}, where);
        read_opt(p, "n_trees", where, params.iforest.n_trees);
        read_opt(p, "subsample", where, params.iforest.subsample);
        read_opt(p, "score_threshold", where, params.iforest.score_threshold);
        break;
    case Algorithm::LOF:
        reject_unknown(p, {"k", "contamination"}, where);
        read_opt(p, "k", where, params.lof.k);
        read_opt(p, "contamination", where, params.lof.contamination);
        break;
    case Algorithm::Envelope:
        reject_unknown(p, {"support_fraction", "contamination", "trials", "max_steps"}, where);
        read_opt(p, "support_fraction", where, params.envelope.support_fraction);
        read_opt(p, "contamination", where, params.envelope.contamination);
        read_opt(p, "trials", where, params.envelope.trials);
        read_opt(p, "max_steps", where, params.envelope.max_steps);
        break;
    }
}

AlgorithmEntry parse_algorithm_entry(const json& j, std::size_t index) {
    const std::string where = "algorithms[" + std::to_string(index) + "]";
    AlgorithmEntry entry;
    std::string algo_name;
    if (j.is_string()) {
        algo_name = j.get<std::string>();
    } else {
        reject_unknown(j, {"algorithm", "name", "params"}, where);
        algo_name = get<std::string>(j, "algorithm", where);
    }
    const auto algorithm = parse_algorithm(algo_name);
    if (!algorithm) {
        throw ConfigError(where + ": unknown algorithm '" + algo_name + "'");
    }
    entry.algorithm = *algorithm;
    entry.name = algo_name;
    if (j.is_object()) {
        read_opt(j, "name", where, entry.name);
        if (j.contains("params")) {
            parse_params(j.at("params"), entry.algorithm, entry.params, where + ".params");
        }
    }
    return entry;
}

struct LoadedDataset {
    std::optional<Dataset> dataset;
    std::string error;
};

LoadedDataset load_entry(const DatasetEntry& entry) {
    LoadedDataset out;
    try {
        Dataset raw = entry.synthetic ? generate_synthetic(*entry.synthetic)
                                      : load_csv(*entry.path, entry.label_column);
        out.dataset.emplace(entry.name, raw.points(), raw.labels(), raw.temporal());
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

BenchRow run_cell(const DatasetEntry& entry, const LoadedDataset& loaded,
                  const AlgorithmEntry& algo, std::uint64_t seed,
                  std::chrono::duration<double> timeout) {
    BenchRow row;
    row.dataset = entry.name;
    row.algorithm = algo.name;
    row.seed = seed;
    if (!loaded.dataset) {
        row.status = CellStatus::Error;
        row.message = loaded.error;
        return row;
    }
    const Dataset& dataset = *loaded.dataset;
    if (!dataset.has_labels()) {
        row.status = CellStatus::Error;
        row.message = "dataset has no labels; metrics need ground truth";
        return row;
    }

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(timeout);
    std::optional<DetectionResult> result;
    try {
        DeadlineScope scope(deadline);
        result = detect(dataset, algo.algorithm, seed, algo.params, entry.split);
    } catch (const DeadlineExceeded&) {
        row.status = CellStatus::NaTimeout;
    } catch (const std::exception& e) {
        row.status = CellStatus::Error;
        row.message = e.what();
    }
    const auto elapsed = Clock::now() - start;
    row.wall_time_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    if (row.status != CellStatus::Ok) {
        return row;
    }
    if (elapsed >= timeout) {
        row.status = CellStatus::NaTimeout;
        return row;
    }
    row.metrics = evaluate(result->scores, result->predictions, *dataset.labels());
    return row;
}

}  // namespace

void BenchConfig::validate() const {
    if (datasets.empty()) {
        throw ConfigError("config needs at least one dataset");
    }
    if (algorithms.empty()) {
        throw ConfigError("config needs at least one algorithm");
    }
    if (seeds.empty()) {
        throw ConfigError("config needs at least one seed");
    }
    if (!(timeout.count() > 0.0)) {
        throw ConfigError("timeout must be positive");
    }
    if (workers == 0) {
        throw ConfigError("workers must be positive");
    }
    std::set<std::string> names;
    for (const auto& d : datasets) {
        if (!names.insert(d.name).second) {
            throw ConfigError("duplicate dataset name '" + d.name + "'");
        }
        if (!(d.split.fraction > 0.0 && d.split.fraction <= 1.0)) {
            throw ConfigError("dataset '" + d.name + "': train_fraction must lie in (0, 1]");
        }
    }
    names.clear();
    for (const auto& a : algorithms) {
        if (!names.insert(a.name).second) {
            throw ConfigError("duplicate algorithm name '" + a.name + "'");
        }
    }
}

BenchConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root,
                   {"datasets", "algorithms", "seeds", "repeats", "timeout_seconds", "workers",
                    "output_dir"},
                   "config");
    BenchConfig config;
    if (!root.contains("datasets") || !root.at("datasets").is_array()) {
        throw ConfigError("config.datasets must be an array");
    }
    if (!root.contains("algorithms") || !root.at("algorithms").is_array()) {
        throw ConfigError("config.algorithms must be an array");
    }
    for (std::size_t i = 0; i < root.at("datasets").size(); ++i) {
        config.datasets.push_back(parse_dataset(root.at("datasets")[i], i, base_dir));
    }
    for (std::size_t i = 0; i < root.at("algorithms").size(); ++i) {
        config.algorithms.push_back(parse_algorithm_entry(root.at("algorithms")[i], i));
    }
    if (root.contains("seeds") && root.contains("repeats")) {
        throw ConfigError("give either 'seeds' or 'repeats', not both");
    }
    if (root.contains("seeds")) {
        config.seeds = get<std::vector<std::uint64_t>>(root, "seeds", "config");
    } else if (root.contains("repeats")) {
        const auto repeats = get<std::size_t>(root, "repeats", "config");
        config.seeds.clear();
        for (std::size_t s = 0; s < repeats; ++s) {
            config.seeds.push_back(s);
        }
    }
    if (root.contains("timeout_seconds")) {
        config.timeout = std::chrono::duration<double>(get<double>(root, "timeout_seconds", "config"));
    }
    read_opt(root, "workers", "config", config.workers);
    if (root.contains("output_dir")) {
        std::filesystem::path out = get<std::string>(root, "output_dir", "config");
        config.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;
    }
    config.validate();
    return config;
}

BenchConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

std::string_view to_string(CellStatus status) noexcept {
    switch (status) {
    case CellStatus::Ok:
        return "ok";
    case CellStatus::NaTimeout:
        return "na-timeout";
    case CellStatus::Error:
        return "error";
    }
    return "error";
}

std::optional<CellStatus> parse_status(std::string_view text) {
    if (text == "ok") return CellStatus::Ok;
    if (text == "na-timeout") return CellStatus::NaTimeout;
    if (text == "error") return CellStatus::Error;
    return std::nullopt;
}

bool BenchReport::has_errors() const noexcept {
    return std::any_of(rows.begin(), rows.end(),
                       [](const BenchRow& r) { return r.status == CellStatus::Error; });
}

BenchReport run_benchmark(const BenchConfig& config) {
    config.validate();

    std::vector<LoadedDataset> loaded;
    loaded.reserve(config.datasets.size());
    for (const auto& entry : config.datasets) {
        loaded.push_back(load_entry(entry));
    }

    struct Cell {
        std::size_t dataset;
        std::size_t algorithm;
        std::size_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            for (std::size_t s = 0; s < config.seeds.size(); ++s) {
                cells.push_back({d, a, s});
            }
        }
    }

    BenchReport report;
    report.rows.resize(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            report.rows[i] = run_cell(config.datasets[c.dataset], loaded[c.dataset],
                                      config.algorithms[c.algorithm], config.seeds[c.seed],
                                      config.timeout);
        }
    };

    const std::size_t workers = std::min(config.workers, std::max<std::size_t>(cells.size(), 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    return report;
}

std::string_view to_string(Metric metric) noexcept {
    switch (metric) {
    case Metric::Precision:
        return "precision";
    case Metric::Recall:
        return "recall";
    case Metric::F1:
        return "f1";
    case Metric::AucRoc:
        return "auc_roc";
    }
    return "f1";
}

std::optional<Metric> parse_metric(std::string_view name) {
    if (name == "precision") return Metric::Precision;
    if (name == "recall") return Metric::Recall;
    if (name == "f1") return Metric::F1;
    if (name == "auc_roc" || name == "auc") return Metric::AucRoc;
    return std::nullopt;
}

double metric_value(const MetricBundle& m, Metric metric) noexcept {
    switch (metric) {
    case Metric::Precision:
        return m.precision;
    case Metric::Recall:
        return m.recall;
    case Metric::F1:
        return m.f1;
    case Metric::AucRoc:
        return m.auc_roc;
    }
    return 0.0;
}

std::map<std::string, std::size_t> winner_tally(const BenchReport& report, Metric metric) {
    std::map<std::string, std::size_t> counts;
    // dataset -> algorithm -> (sum, runs)
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> grid;
    for (const auto& row : report.rows) {
        counts.try_emplace(row.algorithm, 0);
        if (row.status != CellStatus::Ok) {
            continue;
        }
        auto& cell = grid[row.dataset][row.algorithm];
        cell.first += metric_value(row.metrics, metric);
        ++cell.second;
    }
    if (grid.empty()) {
        throw std::invalid_argument("winner_tally: no ok rows carry metric '" +
                                    std::string(to_string(metric)) + "'");
    }
    for (const auto& [dataset, algos] : grid) {
        std::map<std::string, long long> rounded;
        long long best = std::numeric_limits<long long>::min();
        for (const auto& [algo, acc] : algos) {
            const double mean = acc.first / static_cast<double>(acc.second);
            rounded[algo] = std::llround(mean * 1e4);
            best = std::max(best, rounded[algo]);
        }
        for (const auto& [algo, value] : rounded) {
            if (value == best) {
                ++counts[algo];
            }
        }
    }
    return counts;
}

std::vector<RunSpread> run_spread(const BenchReport& report, Metric metric) {
    std::vector<RunSpread> out;
    std::map<std::pair<std::string, std::string>, std::vector<double>> runs;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& row : report.rows) {
        if (row.status != CellStatus::Ok) {
            continue;
        }
        auto key = std::make_pair(row.dataset, row.algorithm);
        auto [it, inserted] = runs.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        it->second.push_back(metric_value(row.metrics, metric));
    }
    for (const auto& key : order) {
        const auto& values = runs[key];
        RunSpread s;
        s.dataset = key.first;
        s.algorithm = key.second;
        s.runs = values.size();
        for (double v : values) {
            s.mean += v;
        }
        s.mean /= static_cast<double>(values.size());
        if (values.size() >= 2) {
            s.stddev = run_stddev(values);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace treead
