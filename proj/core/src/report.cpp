#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "treead/bench.hpp"

namespace treead {
namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::string metric_cell(const BenchRow& row, double value) {
    return row.status == CellStatus::Ok ? fixed(value, 4) : "NA";
}

std::string render_csv(const BenchReport& report, bool include_timing) {
    std::ostringstream out;
    out << "dataset,algorithm,seed,precision,recall,f1,auc_roc,wall_time_ms,status\n";
    for (const auto& r : report.rows) {
        out << r.dataset << ',' << r.algorithm << ',' << r.seed << ','
            << metric_cell(r, r.metrics.precision) << ',' << metric_cell(r, r.metrics.recall) << ','
            << metric_cell(r, r.metrics.f1) << ',' << metric_cell(r, r.metrics.auc_roc) << ','
            << (include_timing ? fixed(r.wall_time_ms, 3) : "") << ',' << to_string(r.status)
            << '\n';
    }
    return out.str();
}

std::string render_json(const BenchReport& report, bool include_timing) {
    nlohmann::ordered_json root;
    root["generator"] = report.generator;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["dataset"] = r.dataset;
        row["algorithm"] = r.algorithm;
        row["seed"] = r.seed;
        const bool ok = r.status == CellStatus::Ok;
        auto put = [&](const char* key, double value, bool defined) {
            row[key] = ok ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
            row[std::string(key) + "_undefined"] = ok && !defined;
        };
        put("precision", r.metrics.precision, r.metrics.precision_defined);
        put("recall", r.metrics.recall, r.metrics.recall_defined);
        put("f1", r.metrics.f1, r.metrics.f1_defined);
        put("auc_roc", r.metrics.auc_roc, r.metrics.auc_defined);
        row["auc_basis"] = r.auc_basis;
        if (include_timing) {
            row["wall_time_ms"] = r.wall_time_ms;
        }
        row["status"] = std::string(to_string(r.status));
        if (!r.message.empty()) {
            row["message"] = r.message;
        }
        rows.push_back(std::move(row));
    }
    root["rows"] = std::move(rows);
    return root.dump(2) + "\n";
}

std::string render_markdown(const BenchReport& report, bool include_timing) {
    std::ostringstream out;
    std::vector<std::string> order;
    std::map<std::string, std::vector<const BenchRow*>> by_dataset;
    for (const auto& r : report.rows) {
        auto [it, inserted] = by_dataset.try_emplace(r.dataset);
        if (inserted) {
            order.push_back(r.dataset);
        }
        it->second.push_back(&r);
    }
    out << "# Benchmark report\n";
    for (const auto& name : order) {
        out << "\n## " << name << "\n\n"
            << "| Algorithm | Seed | Precision | Recall | F1 | AUC-ROC | Time (ms) | Status |\n"
            << "|---|---|---|---|---|---|---|---|\n";
        for (const BenchRow* r : by_dataset[name]) {
            out << "| " << r->algorithm << " | " << r->seed << " | "
                << metric_cell(*r, r->metrics.precision) << " | "
                << metric_cell(*r, r->metrics.recall) << " | " << metric_cell(*r, r->metrics.f1)
                << " | " << metric_cell(*r, r->metrics.auc_roc) << " | "
                << (include_timing ? fixed(r->wall_time_ms, 1) : "-") << " | "
                << to_string(r->status) << " |\n";
        }
    }

    const auto f1 = run_spread(report, Metric::F1);
    const auto auc = run_spread(report, Metric::AucRoc);
    if (!f1.empty()) {
        out << "\n## Spread across seeds\n\n"
            << "| Dataset | Algorithm | Runs | F1 mean | F1 std | AUC-ROC mean | AUC-ROC std |\n"
            << "|---|---|---|---|---|---|---|\n";
        auto std_cell = [](const RunSpread& s) { return s.stddev ? fixed(*s.stddev, 4) : "-"; };
        for (std::size_t i = 0; i < f1.size(); ++i) {
            out << "| " << f1[i].dataset << " | " << f1[i].algorithm << " | " << f1[i].runs << " | "
                << fixed(f1[i].mean, 4) << " | " << std_cell(f1[i]) << " | "
                << fixed(auc[i].mean, 4) << " | " << std_cell(auc[i]) << " |\n";
        }
    }
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

std::string render_report(const BenchReport& report, ReportFormat format, bool include_timing) {
    switch (format) {
    case ReportFormat::Csv:
        return render_csv(report, include_timing);
    case ReportFormat::Json:
        return render_json(report, include_timing);
    case ReportFormat::Markdown:
        return render_markdown(report, include_timing);
    }
    return {};
}

void emit_report(const BenchReport& report, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write report '" + path.string() + "'");
    }
    out << render_report(report, format);
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

BenchReport read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open report '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("report '" + path.string() + "' is empty");
    }
    const auto header = split_csv_line(line);
    const std::vector<std::string> expected{"dataset", "algorithm", "seed", "precision", "recall",
                                            "f1", "auc_roc", "wall_time_ms", "status"};
    if (header != expected) {
        throw std::runtime_error("report '" + path.string() + "' has an unexpected header");
    }

    BenchReport report;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line);
        const std::string where = path.string() + " line " + std::to_string(line_no);
        if (f.size() != expected.size()) {
            throw std::runtime_error(where + ": expected 9 fields");
        }
        BenchRow row;
        row.dataset = f[0];
        row.algorithm = f[1];
        const auto status = parse_status(f[8]);
        if (!status) {
            throw std::runtime_error(where + ": unknown status '" + f[8] + "'");
        }
        row.status = *status;
        try {
            row.seed = std::stoull(f[2]);
            if (row.status == CellStatus::Ok) {
                row.metrics.precision = std::stod(f[3]);
                row.metrics.recall = std::stod(f[4]);
                row.metrics.f1 = std::stod(f[5]);
                row.metrics.auc_roc = std::stod(f[6]);
                row.metrics.precision_defined = row.metrics.recall_defined = true;
                row.metrics.f1_defined = row.metrics.auc_defined = true;
            }
            row.wall_time_ms = f[7].empty() ? 0.0 : std::stod(f[7]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": malformed number");
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace treead
