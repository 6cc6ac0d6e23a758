#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace treead {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Labels = std::vector<std::uint8_t>;
using ScoreVector = std::vector<double>;
using Predictions = std::vector<std::uint8_t>;

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Named N x D real matrix with optional binary labels (1 = anomaly).
/// Validated on construction and immutable afterwards.
class Dataset {
public:
    Dataset(std::string name, Matrix points, std::optional<Labels> labels = std::nullopt,
            bool temporal = false);

    const std::string& name() const noexcept { return name_; }
    const Matrix& points() const noexcept { return points_; }
    const std::optional<Labels>& labels() const noexcept { return labels_; }
    bool temporal() const noexcept { return temporal_; }

    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    std::size_t dims() const noexcept { return static_cast<std::size_t>(points_.cols()); }
    bool has_labels() const noexcept { return labels_.has_value(); }
    std::size_t anomaly_count() const noexcept;

    /// Rows in the given order. Labels and the temporal flag carry over.
    Dataset subset(std::span<const std::size_t> rows, std::string name) const;

private:
    std::string name_;
    Matrix points_;
    std::optional<Labels> labels_;
    bool temporal_;
};

enum class SplitMode {
    TrainFractionAllTest,  // train on a fraction of all rows, test on everything
    NormalOnlyTrain,       // train on a fraction of the label-0 rows, test on everything
};

struct SplitSpec {
    SplitMode mode = SplitMode::TrainFractionAllTest;
    double fraction = 0.7;
    std::uint64_t seed = 0;
    /// Take the leading rows instead of a random sample (time-series use).
    bool contiguous = false;
};

struct TrainTest {
    Dataset train;
    Dataset test;
};

TrainTest split(const Dataset& dataset, const SplitSpec& spec);

/// Indices selected for training, ascending. Exposed for reproducibility checks.
std::vector<std::size_t> split_indices(const Dataset& dataset, const SplitSpec& spec);

enum class SyntheticKind { UnivariateSeries, MultivariateBlobs };

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::UnivariateSeries;
    std::size_t size = 1000;
    std::size_t dims = 1;
    std::size_t anomaly_count = 1;
    double anomaly_magnitude = 8.0;  // in units of the base signal's standard deviation
    std::uint64_t seed = 0;
};

Dataset generate_synthetic(const SyntheticSpec& spec);

/// Reads a headered, comma-separated file of finite reals. When label_column
/// is given, that column becomes the label vector and must hold 0/1 values.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& label_column = std::nullopt);

/// Writes columns x0..x{D-1} and, when labels exist, a trailing "label" column.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace treead
