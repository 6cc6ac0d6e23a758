#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "treead/dataset.hpp"

namespace treead {

struct EnvelopeParams {
    double support_fraction = 0.75;
    double contamination = 0.1;
    std::size_t trials = 30;
    std::size_t max_steps = 100;
};

/// Robust location/scatter from concentration steps, plus the squared
/// Mahalanobis cutoff taken from the training distances.
struct EnvelopeModel {
    Vector location;
    Eigen::MatrixXd covariance;
    double threshold = 0.0;
    double log_det = 0.0;
    double support_fraction = 0.75;
    double contamination = 0.1;

    ScoreVector squared_mahalanobis(const Matrix& points) const;
    Predictions predict(const ScoreVector& squared_distances) const;
};

struct EnvelopeFit {
    EnvelopeModel model;
    /// log det of the covariance after each concentration step, per trial.
    std::vector<std::vector<double>> trial_log_dets;
    std::size_t best_trial = 0;
};

EnvelopeFit fit_envelope(const Matrix& train, std::uint64_t seed, const EnvelopeParams& params = {});

struct EnvelopeResult {
    ScoreVector scores;
    Predictions predictions;
};

EnvelopeResult envelope_run(const Dataset& train, const Dataset& test, std::uint64_t seed,
                            const EnvelopeParams& params = {});

}  // namespace treead
