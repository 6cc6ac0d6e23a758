#include "treead/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <numbers>
#include <sstream>

#include "treead/rng.hpp"

namespace treead {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_real(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    if (cell.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        return std::nullopt;
    }
    return value;
}

// ceil(fraction * n) without the 0.7 * 10 = 7.000000000000001 surprise.
std::size_t fraction_count(double fraction, std::size_t n) {
    const double exact = fraction * static_cast<double>(n);
    const double rounded = std::round(exact);
    const double count = std::abs(exact - rounded) < 1e-9 ? rounded : std::ceil(exact);
    return std::clamp<std::size_t>(static_cast<std::size_t>(count), 1, n);
}

}  // namespace

Dataset::Dataset(std::string name, Matrix points, std::optional<Labels> labels, bool temporal)
    : name_(std::move(name)), points_(std::move(points)), labels_(std::move(labels)),
      temporal_(temporal) {
    if (points_.rows() < 1 || points_.cols() < 1) {
        throw DatasetError("dataset '" + name_ + "' must have at least one row and one column");
    }
    if (!points_.allFinite()) {
        throw DatasetError("dataset '" + name_ + "' contains non-finite values");
    }
    if (labels_) {
        if (labels_->size() != size()) {
            throw DatasetError("dataset '" + name_ + "': label count " +
                               std::to_string(labels_->size()) + " does not match row count " +
                               std::to_string(size()));
        }
        if (std::any_of(labels_->begin(), labels_->end(), [](auto v) { return v > 1; })) {
            throw DatasetError("dataset '" + name_ + "': labels must be 0 or 1");
        }
    }
}

std::size_t Dataset::anomaly_count() const noexcept {
    if (!labels_) {
        return 0;
    }
    return static_cast<std::size_t>(std::count(labels_->begin(), labels_->end(), 1));
}

Dataset Dataset::subset(std::span<const std::size_t> rows, std::string name) const {
    Matrix sub(static_cast<Eigen::Index>(rows.size()), points_.cols());
    std::optional<Labels> sub_labels;
    if (labels_) {
        sub_labels.emplace();
        sub_labels->reserve(rows.size());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= size()) {
            throw std::out_of_range("subset row index out of range");
        }
        sub.row(static_cast<Eigen::Index>(i)) = points_.row(static_cast<Eigen::Index>(rows[i]));
        if (labels_) {
            sub_labels->push_back((*labels_)[rows[i]]);
        }
    }
    return Dataset(std::move(name), std::move(sub), std::move(sub_labels), temporal_);
}

std::vector<std::size_t> split_indices(const Dataset& dataset, const SplitSpec& spec) {
    if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
        throw std::invalid_argument("split fraction must lie in (0, 1]");
    }

    std::vector<std::size_t> pool;
    if (spec.mode == SplitMode::NormalOnlyTrain) {
        if (!dataset.has_labels()) {
            throw DatasetError("normal-only split of '" + dataset.name() + "' requires labels");
        }
        const Labels& labels = *dataset.labels();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == 0) {
                pool.push_back(i);
            }
        }
        if (pool.empty()) {
            throw DatasetError("normal-only split of '" + dataset.name() +
                               "' found no normal rows");
        }
        if (pool.size() < 2) {
            return pool;
        }
    } else {
        pool.resize(dataset.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    }

    const std::size_t count = fraction_count(spec.fraction, pool.size());
    std::vector<std::size_t> chosen;
    if (spec.contiguous) {
        chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    } else {
        Rng rng(spec.seed);
        for (std::size_t pick : rng.sample_without_replacement(pool.size(), count)) {
            chosen.push_back(pool[pick]);
        }
        std::sort(chosen.begin(), chosen.end());
    }
    return chosen;
}

TrainTest split(const Dataset& dataset, const SplitSpec& spec) {
    const auto rows = split_indices(dataset, spec);
    return TrainTest{dataset.subset(rows, dataset.name() + "/train"), dataset};
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.size == 0) {
        throw std::invalid_argument("synthetic size must be positive");
    }
    if (spec.anomaly_count > spec.size) {
        throw std::invalid_argument("anomaly_count exceeds dataset size");
    }
    if (!(spec.anomaly_magnitude > 0.0)) {
        throw std::invalid_argument("anomaly_magnitude must be positive");
    }

    Rng rng(spec.seed);
    Labels labels(spec.size, 0);
    for (std::size_t idx : rng.sample_without_replacement(spec.size, spec.anomaly_count)) {
        labels[idx] = 1;
    }

    if (spec.kind == SyntheticKind::UnivariateSeries) {
        if (spec.dims != 1) {
            throw std::invalid_argument("univariate series must have dims = 1");
        }
        constexpr double kAmplitude = 3.0;
        constexpr double kPeriod = 50.0;
        Matrix points(static_cast<Eigen::Index>(spec.size), 1);
        for (std::size_t t = 0; t < spec.size; ++t) {
            points(static_cast<Eigen::Index>(t), 0) =
                kAmplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / kPeriod) +
                rng.normal();
        }
        double sigma = 1.0;
        if (spec.size > 1) {
            const double mean = points.col(0).mean();
            sigma = std::sqrt((points.col(0).array() - mean).square().sum() /
                              static_cast<double>(spec.size - 1));
        }
        for (std::size_t t = 0; t < spec.size; ++t) {
            if (labels[t] == 1) {
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                points(static_cast<Eigen::Index>(t), 0) += sign * spec.anomaly_magnitude * sigma;
            }
        }
        return Dataset("synthetic-uni-" + std::to_string(spec.seed), std::move(points),
                       std::move(labels), true);
    }

    if (spec.dims == 0) {
        throw std::invalid_argument("synthetic dims must be positive");
    }
    // Two unit-variance isotropic blobs whose centres sit 10 sigma apart.
    const auto dims = static_cast<Eigen::Index>(spec.dims);
    const Vector centre_a = Vector::Zero(dims);
    const Vector centre_b = Vector::Constant(dims, 10.0 / std::sqrt(static_cast<double>(dims)));
    const double min_distance = spec.anomaly_magnitude;

    Matrix points(static_cast<Eigen::Index>(spec.size), dims);
    std::size_t normal_seen = 0;
    for (std::size_t i = 0; i < spec.size; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        if (labels[i] == 0) {
            const Vector& centre = (normal_seen++ % 2 == 0) ? centre_a : centre_b;
            for (Eigen::Index d = 0; d < dims; ++d) {
                points(row, d) = centre(d) + rng.normal();
            }
            continue;
        }
        const bool near_a = rng.uniform() < 0.5;
        const Vector& home = near_a ? centre_a : centre_b;
        const Vector& other = near_a ? centre_b : centre_a;
        Vector candidate;
        bool placed = false;
        for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
            Vector direction(dims);
            for (Eigen::Index d = 0; d < dims; ++d) {
                direction(d) = rng.normal();
            }
            const double norm = direction.norm();
            if (norm == 0.0) {
                continue;
            }
            const double radius = min_distance * (1.0 + 0.5 * rng.uniform());
            candidate = home + radius * direction / norm;
            placed = (candidate - other).norm() >= min_distance;
        }
        if (!placed) {
            // Straight away from the other centre always clears both.
            const Vector away = (home - other).normalized();
            candidate = home + min_distance * (1.0 + 0.5 * rng.uniform()) * away;
        }
        points.row(row) = candidate.transpose();
    }
    return Dataset("synthetic-multi-" + std::to_string(spec.seed), std::move(points),
                   std::move(labels), false);
}

Dataset load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("cannot open '" + path.string() + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw DatasetError("'" + path.string() + "' is empty (no header row)");
    }
    if (line.starts_with("\xEF\xBB\xBF")) {
        line.erase(0, 3);
    }
    const std::vector<std::string> header = [&] {
        std::vector<std::string> names;
        for (auto f : split_fields(line)) {
            names.emplace_back(f);
        }
        return names;
    }();

    std::optional<std::size_t> label_index;
    if (label_column) {
        const auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end()) {
            throw DatasetError("'" + path.string() + "': label column '" + *label_column +
                               "' not found in header");
        }
        label_index = static_cast<std::size_t>(it - header.begin());
    }
    const std::size_t feature_count = header.size() - (label_index ? 1 : 0);
    if (feature_count == 0) {
        throw DatasetError("'" + path.string() + "' has no feature columns");
    }

    std::vector<double> values;
    Labels labels;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DatasetError("'" + path.string() + "' line " + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto value = parse_real(fields[c]);
            if (!value || !std::isfinite(*value)) {
                throw DatasetError("'" + path.string() + "' line " + std::to_string(line_no) +
                                   ", column '" + header[c] + "': '" + std::string(fields[c]) +
                                   "' is not a finite real");
            }
            if (label_index && c == *label_index) {
                if (*value != 0.0 && *value != 1.0) {
                    throw DatasetError("'" + path.string() + "' line " +
                                       std::to_string(line_no) + ", column '" + header[c] +
                                       "': label must be 0 or 1, got '" +
                                       std::string(fields[c]) + "'");
                }
                labels.push_back(*value == 1.0 ? 1 : 0);
            } else {
                values.push_back(*value);
            }
        }
        ++rows;
    }
    if (rows == 0) {
        throw DatasetError("'" + path.string() + "' has a header but no data rows");
    }

    Matrix points = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(feature_count));
    std::optional<Labels> maybe_labels;
    if (label_index) {
        maybe_labels = std::move(labels);
    }
    return Dataset(path.stem().string(), std::move(points), std::move(maybe_labels));
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DatasetError("cannot write '" + path.string() + "'");
    }
    for (std::size_t d = 0; d < dataset.dims(); ++d) {
        out << (d ? "," : "") << 'x' << d;
    }
    if (dataset.has_labels()) {
        out << ",label";
    }
    out << '\n';
    out.precision(17);
    const Matrix& points = dataset.points();
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index d = 0; d < points.cols(); ++d) {
            out << (d ? "," : "") << points(i, d);
        }
        if (dataset.has_labels()) {
            out << ',' << static_cast<int>((*dataset.labels())[static_cast<std::size_t>(i)]);
        }
        out << '\n';
    }
    if (!out) {
        throw DatasetError("write to '" + path.string() + "' failed");
    }
}

}  // namespace treead
