#include <gtest/gtest.h>

#include <filesystem>
#include <cmath>
#include <fstream>
#include <sstream>

#include "treead/bench.hpp"
#include "treead/rng.hpp"

using namespace treead;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"({
  "datasets": [
    {"name": "uni", "synthetic": {"kind": "uni", "size": 200, "anomalies": 2, "magnitude": 8, "seed": 3}},
    {"name": "multi", "synthetic": {"kind": "multi", "size": 150, "dims": 3, "anomalies": 3, "magnitude": 6, "seed": 4}}
  ],
  "algorithms": ["mgbtai", "dbtai", "iforest", "lof", "envelope"],
  "seeds": [0, 1],
  "timeout_seconds": 60
})";

BenchRow row(std::string ds, std::string algo, double recall, std::uint64_t seed = 0) {
    BenchRow r;
    r.dataset = std::move(ds);
    r.algorithm = std::move(algo);
    r.seed = seed;
    r.metrics.recall = recall;
    r.metrics.recall_defined = true;
    return r;
}

std::string csv_without_timing(const BenchReport& r) { return render_report(r, ReportFormat::Csv, false); }

}  // namespace

TEST(Config, ParsesFullSchema) {
    const auto c = parse_config(R"({
      "datasets": [
        {"path": "data/a.csv", "label_column": "label", "train_fraction": 0.5, "contiguous": true},
        {"name": "syn", "synthetic": {"kind": "multi", "size": 100, "dims": 2, "anomalies": 1, "magnitude": 5, "seed": 9}}
      ],
      "algorithms": [
        "iforest",
        {"algorithm": "lof", "name": "lof-k5", "params": {"k": 5}},
        {"algorithm": "dbtai", "params": {"leaf_level": 2}}
      ],
      "repeats": 4,
      "timeout_seconds": 2.5,
      "workers": 3,
      "output_dir": "out"
    })", "/base");
    ASSERT_EQ(c.datasets.size(), 2u);
    EXPECT_EQ(c.datasets[0].name, "a");
    EXPECT_EQ(*c.datasets[0].path, fs::path("/base/data/a.csv"));
    EXPECT_EQ(*c.datasets[0].label_column, "label");
    EXPECT_DOUBLE_EQ(c.datasets[0].split.fraction, 0.5);
    EXPECT_TRUE(c.datasets[0].split.contiguous);
    EXPECT_EQ(c.datasets[1].synthetic->dims, 2u);
    ASSERT_EQ(c.algorithms.size(), 3u);
    EXPECT_EQ(c.algorithms[1].name, "lof-k5");
    EXPECT_EQ(c.algorithms[1].params.lof.k, 5u);
    EXPECT_EQ(c.algorithms[2].params.tree->leaf_level, 2u);
    EXPECT_TRUE(c.algorithms[2].params.tree->density_weighting);
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3}));
    EXPECT_DOUBLE_EQ(c.timeout.count(), 2.5);
    EXPECT_EQ(c.workers, 3u);
    EXPECT_EQ(c.output_dir, fs::path("/base/out"));
}

TEST(Config, Defaults) {
    const auto c = parse_config(R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": ["mgbtai"]})");
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2}));
    EXPECT_DOUBLE_EQ(c.timeout.count(), 120.0);
    EXPECT_EQ(c.workers, 1u);
}

TEST(Config, Rejections) {
    const char* bad[] = {
        R"({"datasets": [], "algorithms": ["mgbtai"]})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": []})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": ["mgbtai"], "colour": 1})",
        R"({"datasets": [{"synthetic": {"kind": "uni", "sise": 5}}], "algorithms": ["mgbtai"]})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": [{"algorithm": "lof", "params": {"kk": 3}}]})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": ["ocsvm"]})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": ["mgbtai"], "timeout_seconds": 0})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": ["mgbtai"], "seeds": [1], "repeats": 2})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}, {"synthetic": {"kind": "uni"}}], "algorithms": ["mgbtai"]})",
        R"({"datasets": [{"name": "x"}], "algorithms": ["mgbtai"]})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": ["mgbtai"], "workers": "two"})",
        R"({"datasets": [{"synthetic": {"kind": "uni"}}], "algorithms": [{"algorithm": "mgbtai", "params": {"leaf_level": 0}}]})",
        R"(not json)",
    };
    for (const char* text : bad) {
        EXPECT_THROW(parse_config(text), ConfigError) << text;
    }
}

TEST(Config, MissingFile) {
    EXPECT_THROW(load_config("/nonexistent/bench.json"), ConfigError);
}

TEST(RunBenchmark, TwoTreeRows) {
    auto c = parse_config(R"({"datasets": [{"synthetic": {"kind": "uni", "size": 300, "seed": 2}}],
                              "algorithms": ["mgbtai", "dbtai"], "seeds": [0]})");
    const auto report = run_benchmark(c);
    ASSERT_EQ(report.rows.size(), 2u);
    for (const auto& r : report.rows) {
        EXPECT_EQ(r.status, CellStatus::Ok) << r.message;
        EXPECT_GE(r.wall_time_ms, 0.0);
        EXPECT_TRUE(r.metrics.auc_defined);
    }
    EXPECT_EQ(report.rows[0].algorithm, "mgbtai");
    EXPECT_EQ(report.rows[1].algorithm, "dbtai");
    EXPECT_EQ(report.generator, "mt19937_64");
}

TEST(RunBenchmark, TinyTimeoutMarksEveryCell) {
    auto c = parse_config(kSmallConfig);
    c.timeout = std::chrono::duration<double>(1e-6);
    const auto report = run_benchmark(c);
    ASSERT_EQ(report.rows.size(), 20u);
    for (const auto& r : report.rows) EXPECT_EQ(r.status, CellStatus::NaTimeout);
    EXPECT_FALSE(report.has_errors());
    EXPECT_NE(csv_without_timing(report).find(",NA,NA,NA,NA,,na-timeout"), std::string::npos);
}

TEST(RunBenchmark, RepeatableAndScheduleIndependent) {
    auto c = parse_config(kSmallConfig);
    const auto a = run_benchmark(c);
    const auto b = run_benchmark(c);
    c.workers = 8;
    const auto d = run_benchmark(c);
    ASSERT_EQ(a.rows.size(), 20u);
    for (const auto& r : a.rows) EXPECT_EQ(r.status, CellStatus::Ok) << r.dataset << "/" << r.algorithm << ": " << r.message;
    for (auto fmt : {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown}) {
        EXPECT_EQ(render_report(a, fmt, false), render_report(b, fmt, false));
        EXPECT_EQ(render_report(a, fmt, false), render_report(d, fmt, false));
    }
    // Rows follow config order: dataset, then algorithm, then seed.
    EXPECT_EQ(a.rows[0].dataset, "uni");
    EXPECT_EQ(a.rows[1].seed, 1u);
    EXPECT_EQ(a.rows[2].algorithm, "dbtai");
    EXPECT_EQ(a.rows[10].dataset, "multi");
}

TEST(RunBenchmark, LoadFailureBecomesErrorRows) {
    auto c = parse_config(R"({"datasets": [{"path": "/nonexistent/x.csv", "label_column": "label"},
                                            {"synthetic": {"kind": "uni", "size": 100}}],
                              "algorithms": ["mgbtai", "iforest"], "seeds": [5]})");
    const auto report = run_benchmark(c);
    ASSERT_EQ(report.rows.size(), 4u);
    EXPECT_EQ(report.rows[0].status, CellStatus::Error);
    EXPECT_EQ(report.rows[1].status, CellStatus::Error);
    EXPECT_FALSE(report.rows[0].message.empty());
    EXPECT_EQ(report.rows[2].status, CellStatus::Ok);
    EXPECT_EQ(report.rows[3].status, CellStatus::Ok);
    EXPECT_TRUE(report.has_errors());
}

TEST(RunBenchmark, UnlabelledDatasetIsAnError) {
    const auto dir = fs::temp_directory_path() / "treead-bench-unlabelled";
    fs::create_directories(dir);
    std::ofstream(dir / "u.csv") << "x\n1\n2\n3\n4\n5\n";
    auto c = parse_config(R"({"datasets": [{"path": "u.csv"}], "algorithms": ["mgbtai"], "seeds": [0]})", dir);
    const auto report = run_benchmark(c);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(report.rows[0].status, CellStatus::Error);
    fs::remove_all(dir);
}

TEST(WinnerTally, TiesCreditBoth) {
    BenchReport r;
    r.rows = {row("d", "A", 1.0), row("d", "B", 1.0), row("d", "C", 0.5)};
    const auto t = winner_tally(r, Metric::Recall);
    EXPECT_EQ(t.at("A"), 1u);
    EXPECT_EQ(t.at("B"), 1u);
    EXPECT_EQ(t.at("C"), 0u);
}

TEST(WinnerTally, TiesAtFourDecimals) {
    BenchReport r;
    r.rows = {row("d", "A", 0.91234), row("d", "B", 0.91226), row("d", "C", 0.9121)};
    const auto t = winner_tally(r, Metric::Recall);
    EXPECT_EQ(t.at("A"), 1u);
    EXPECT_EQ(t.at("B"), 1u);
    EXPECT_EQ(t.at("C"), 0u);
}

TEST(WinnerTally, SingleAlgorithmWinsAll) {
    BenchReport r;
    r.rows = {row("d1", "A", 0.1), row("d2", "A", 0.0), row("d3", "A", 0.7)};
    EXPECT_EQ(winner_tally(r, Metric::Recall).at("A"), 3u);
}

TEST(WinnerTally, HandTally) {
    BenchReport r;
    r.rows = {row("d1", "A", 0.9), row("d1", "B", 0.8), row("d2", "A", 0.7),
              row("d2", "B", 0.6), row("d3", "A", 0.2), row("d3", "B", 0.3)};
    const auto t = winner_tally(r, Metric::Recall);
    EXPECT_EQ(t, (std::map<std::string, std::size_t>{{"A", 2}, {"B", 1}}));
}

TEST(WinnerTally, AveragesSeedsAndSkipsFailedRows) {
    BenchReport r;
    r.rows = {row("d", "A", 1.0, 0), row("d", "A", 0.0, 1), row("d", "B", 0.6, 0), row("d", "C", 1.0, 0)};
    r.rows[3].status = CellStatus::NaTimeout;
    const auto t = winner_tally(r, Metric::Recall);
    EXPECT_EQ(t.at("B"), 1u);
    EXPECT_EQ(t.at("A"), 0u);
    EXPECT_EQ(t.at("C"), 0u);
}

TEST(WinnerTally, NoOkRows) {
    BenchReport r;
    r.rows = {row("d", "A", 1.0)};
    r.rows[0].status = CellStatus::Error;
    EXPECT_THROW(winner_tally(r, Metric::F1), std::invalid_argument);
    EXPECT_THROW(winner_tally(BenchReport{}, Metric::F1), std::invalid_argument);
}

TEST(WinnerTally, EveryDatasetCreditsSomeone) {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        BenchReport r;
        const std::size_t datasets = 1 + rng.below(5);
        for (std::size_t d = 0; d < datasets; ++d) {
            for (const char* a : {"A", "B", "C"}) {
                r.rows.push_back(row("d" + std::to_string(d), a, std::round(rng.uniform() * 4) / 4));
            }
        }
        std::size_t credits = 0;
        for (const auto& [algo, n] : winner_tally(r, Metric::Recall)) credits += n;
        ASSERT_GE(credits, datasets);
    }
}

TEST(RunSpread, SampleStddevAcrossSeeds) {
    BenchReport r;
    r.rows = {row("d", "A", 0.0, 0), row("d", "A", 0.0, 1), row("d", "A", 1.0, 2), row("d", "B", 0.5, 0)};
    const auto s = run_spread(r, Metric::Recall);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].runs, 3u);
    EXPECT_NEAR(*s[0].stddev, 0.5774, 1e-4);
    EXPECT_FALSE(s[1].stddev.has_value());
}

TEST(Report, CsvShapeAndRounding) {
    BenchReport r;
    r.rows = {row("d", "A", 0.66667), row("d", "B", 0.5)};
    r.rows[0].wall_time_ms = 12.3456;
    const auto csv = render_report(r, ReportFormat::Csv);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "dataset,algorithm,seed,precision,recall,f1,auc_roc,wall_time_ms,status");
    EXPECT_EQ(lines[1], "d,A,0,0.0000,0.6667,0.0000,0.0000,12.346,ok");
}

TEST(Report, EmptyIsHeaderOnly) {
    EXPECT_EQ(render_report(BenchReport{}, ReportFormat::Csv),
              "dataset,algorithm,seed,precision,recall,f1,auc_roc,wall_time_ms,status\n");
}

TEST(Report, JsonCarriesUndefinedFlags) {
    BenchReport r;
    r.rows = {row("d", "A", 1.0)};
    const auto json = render_report(r, ReportFormat::Json);
    EXPECT_NE(json.find("\"recall_undefined\": false"), std::string::npos);
    EXPECT_NE(json.find("\"precision_undefined\": true"), std::string::npos);
    EXPECT_NE(json.find("\"auc_basis\": \"score\""), std::string::npos);
    EXPECT_NE(json.find("\"generator\": \"mt19937_64\""), std::string::npos);
}

TEST(Report, MarkdownTablePerDataset) {
    BenchReport r;
    r.rows = {row("d1", "A", 1.0), row("d2", "A", 0.5)};
    const auto md = render_report(r, ReportFormat::Markdown);
    EXPECT_NE(md.find("## d1"), std::string::npos);
    EXPECT_NE(md.find("## d2"), std::string::npos);
    EXPECT_NE(md.find("| A | 0 | 0.0000 | 0.5000 |"), std::string::npos);
}

TEST(Report, MarkdownSpreadTable) {
    BenchReport r;
    r.rows = {row("d", "A", 0.0, 0), row("d", "A", 0.0, 1), row("d", "A", 1.0, 2)};
    for (auto& x : r.rows) x.metrics.f1 = x.metrics.recall;
    const auto md = render_report(r, ReportFormat::Markdown);
    EXPECT_NE(md.find("| d | A | 3 | 0.3333 | 0.5774 |"), std::string::npos) << md;
}

TEST(Report, CsvRoundTrip) {
    BenchReport r;
    r.rows = {row("d", "A", 0.25), row("d", "B", 1.0, 3)};
    r.rows[1].status = CellStatus::NaTimeout;
    const auto path = fs::temp_directory_path() / "treead-roundtrip.csv";
    emit_report(r, ReportFormat::Csv, path);
    const auto back = read_report_csv(path);
    ASSERT_EQ(back.rows.size(), 2u);
    EXPECT_DOUBLE_EQ(back.rows[0].metrics.recall, 0.25);
    EXPECT_EQ(back.rows[1].status, CellStatus::NaTimeout);
    EXPECT_EQ(back.rows[1].seed, 3u);
    EXPECT_EQ(render_report(back, ReportFormat::Csv), render_report(r, ReportFormat::Csv));
    fs::remove(path);
}

TEST(Report, UnwritablePath) {
    EXPECT_THROW(emit_report(BenchReport{}, ReportFormat::Csv, "/nonexistent/dir/r.csv"), std::runtime_error);
}
