#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "treead/dataset.hpp"

namespace treead {

/// Counts with 1 = anomaly as the positive class.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Undefined values (zero denominators, single-class AUC) are reported as 0
/// with the matching *_defined flag cleared.
struct MetricBundle {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc_roc = 0.0;
    bool precision_defined = false;
    bool recall_defined = false;
    bool f1_defined = false;
    bool auc_defined = false;
};

Confusion confusion(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth);

/// Precision, recall and F1 only; auc fields are left unset.
MetricBundle prf1(const Confusion& c);

/// Probability that a random anomaly outscores a random normal point, ties
/// counting one half. nullopt when truth holds a single class.
std::optional<double> auc_roc(std::span<const double> scores, std::span<const std::uint8_t> truth);

/// Sample standard deviation (n - 1 divisor). Requires at least two values.
double run_stddev(std::span<const double> values);

/// prf1 plus auc_roc in one bundle.
MetricBundle evaluate(std::span<const double> scores, std::span<const std::uint8_t> predicted,
                      std::span<const std::uint8_t> truth);

}  // namespace treead
