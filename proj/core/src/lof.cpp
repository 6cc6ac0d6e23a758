#include "treead/lof.hpp"

#include <algorithm>
#include <stdexcept>

#include "treead/deadline.hpp"
#include "treead/stats.hpp"

namespace treead {
namespace {

struct Neighbourhood {
    std::vector<std::size_t> members;
    std::vector<double> distances;
    double k_distance = 0.0;
};

// Every training row within the k-th smallest distance. skip excludes one row
// (the query itself when scoring the training set).
Neighbourhood neighbourhood(const Matrix& train, const Eigen::Ref<const Eigen::RowVectorXd>& q,
                            std::size_t k, std::size_t skip, std::vector<double>& scratch) {
    const auto n = static_cast<std::size_t>(train.rows());
    std::vector<double> dist(n);
    scratch.clear();
    for (std::size_t j = 0; j < n; ++j) {
        dist[j] = (train.row(static_cast<Eigen::Index>(j)) - q).norm();
        if (j != skip) {
            scratch.push_back(dist[j]);
        }
    }
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     scratch.end());
    Neighbourhood nb;
    nb.k_distance = scratch[k - 1];
    for (std::size_t j = 0; j < n; ++j) {
        if (j != skip && dist[j] <= nb.k_distance) {
            nb.members.push_back(j);
            nb.distances.push_back(dist[j]);
        }
    }
    return nb;
}

double reach_density(const Neighbourhood& nb, const std::vector<double>& k_distance) {
    double total = 0.0;
    for (std::size_t m = 0; m < nb.members.size(); ++m) {
        total += std::max(k_distance[nb.members[m]], nb.distances[m]);
    }
    if (total <= 0.0) {
        return LofModel::kLrdCap;
    }
    return std::min(static_cast<double>(nb.members.size()) / total, LofModel::kLrdCap);
}

double factor(const Neighbourhood& nb, double own_lrd, const std::vector<double>& lrd) {
    double sum = 0.0;
    for (std::size_t o : nb.members) {
        sum += lrd[o];
    }
    return sum / (static_cast<double>(nb.members.size()) * own_lrd);
}

}  // namespace

LofModel LofModel::fit(const Matrix& train, const LofParams& params) {
    const auto n = static_cast<std::size_t>(train.rows());
    if (params.k == 0) {
        throw std::invalid_argument("lof: k must be positive");
    }
    if (params.k >= n) {
        throw std::invalid_argument("lof: k = " + std::to_string(params.k) +
                                    " requires more than k training rows, got " +
                                    std::to_string(n));
    }
    if (!(params.contamination > 0.0 && params.contamination < 1.0)) {
        throw std::invalid_argument("lof: contamination must lie in (0, 1)");
    }

    LofModel model;
    model.train_ = train;
    model.params_ = params;
    model.k_distance_.resize(n);
    model.lrd_.resize(n);

    std::vector<Neighbourhood> hoods(n);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) {
            check_deadline();
        }
        hoods[i] = neighbourhood(train, train.row(static_cast<Eigen::Index>(i)), params.k, i, scratch);
        model.k_distance_[i] = hoods[i].k_distance;
    }
    for (std::size_t i = 0; i < n; ++i) {
        model.lrd_[i] = reach_density(hoods[i], model.k_distance_);
    }
    model.train_scores_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.train_scores_[i] = factor(hoods[i], model.lrd_[i], model.lrd_);
    }
    model.threshold_ = quantile(model.train_scores_, 1.0 - params.contamination);
    return model;
}

ScoreVector LofModel::score(const Matrix& queries) const {
    if (queries.cols() != train_.cols()) {
        throw std::invalid_argument("lof: dimensionality mismatch");
    }
    const auto none = static_cast<std::size_t>(train_.rows());
    ScoreVector scores(static_cast<std::size_t>(queries.rows()));
    std::vector<double> scratch;
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        if (q % 64 == 0) {
            check_deadline();
        }
        const Neighbourhood nb = neighbourhood(train_, queries.row(q), params_.k, none, scratch);
        scores[static_cast<std::size_t>(q)] = factor(nb, reach_density(nb, k_distance_), lrd_);
    }
    return scores;
}

ScoreVector lof_run(const Dataset& train, const Dataset& test, std::size_t k) {
    if (train.dims() != test.dims()) {
        throw std::invalid_argument("lof: train and test dimensionality differ");
    }
    LofParams params;
    params.k = k;
    return LofModel::fit(train.points(), params).score(test.points());
}

}  // namespace treead
