#pragma once

#include <cstddef>
#include <vector>

#include "treead/dataset.hpp"

namespace treead {

struct LofParams {
    std::size_t k = 20;
    /// Fraction of training points whose LOF sets the prediction cutoff.
    double contamination = 0.1;
};

/// Local outlier factor against a fixed training set.
///
/// Neighbourhoods include every point tied with the k-th nearest distance, so
/// they may hold more than k members. A point whose neighbours all coincide
/// with it gets the capped density kLrdCap instead of infinity.
class LofModel {
public:
    static constexpr double kLrdCap = 1e12;

    static LofModel fit(const Matrix& train, const LofParams& params = {});

    /// LOF of arbitrary query rows; neighbours come from every training row.
    ScoreVector score(const Matrix& queries) const;

    /// LOF of the training rows themselves, each excluding itself.
    const ScoreVector& train_scores() const noexcept { return train_scores_; }
    const std::vector<double>& k_distances() const noexcept { return k_distance_; }
    const std::vector<double>& local_reachability() const noexcept { return lrd_; }

    /// Predictions use score > this value.
    double threshold() const noexcept { return threshold_; }

private:
    Matrix train_;
    LofParams params_;
    std::vector<double> k_distance_;
    std::vector<double> lrd_;
    ScoreVector train_scores_;
    double threshold_ = 0.0;
};

ScoreVector lof_run(const Dataset& train, const Dataset& test, std::size_t k = 20);

}  // namespace treead
