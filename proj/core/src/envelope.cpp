#include "treead/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "treead/deadline.hpp"
#include "treead/rng.hpp"
#include "treead/stats.hpp"

namespace treead {
namespace {

struct Gaussian {
    Vector mean;
    Eigen::MatrixXd cov;
    Eigen::LLT<Eigen::MatrixXd> chol;
    double log_det = 0.0;
};

// Mean and maximum-likelihood covariance of the selected rows. A ridge of
// 1e-6 * trace / D is added only when the plain estimate is not positive
// definite.
Gaussian estimate(const Matrix& data, const std::vector<std::size_t>& rows) {
    const auto d = data.cols();
    Gaussian g;
    g.mean = Vector::Zero(d);
    for (std::size_t r : rows) {
        g.mean += data.row(static_cast<Eigen::Index>(r)).transpose();
    }
    g.mean /= static_cast<double>(rows.size());
    g.cov = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t r : rows) {
        const Vector c = data.row(static_cast<Eigen::Index>(r)).transpose() - g.mean;
        g.cov.noalias() += c * c.transpose();
    }
    g.cov /= static_cast<double>(rows.size());

    g.chol.compute(g.cov);
    if (g.chol.info() != Eigen::Success || g.chol.matrixLLT().diagonal().minCoeff() <= 0.0) {
        const double trace = g.cov.trace();
        if (!(trace > 0.0)) {
            throw std::domain_error("envelope: covariance is singular (no spread in the data)");
        }
        g.cov.diagonal().array() += 1e-6 * trace / static_cast<double>(d);
        g.chol.compute(g.cov);
        if (g.chol.info() != Eigen::Success) {
            throw std::domain_error("envelope: covariance singular after regularization");
        }
    }
    g.log_det = 2.0 * g.chol.matrixLLT().diagonal().array().log().sum();
    return g;
}

std::vector<double> distances(const Matrix& data, const Gaussian& g) {
    std::vector<double> out(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        const Vector c = data.row(i).transpose() - g.mean;
        out[static_cast<std::size_t>(i)] = g.chol.matrixL().solve(c).squaredNorm();
    }
    return out;
}

// Rows with the h smallest distances, ties broken by index, returned sorted.
std::vector<std::size_t> closest(const std::vector<double>& dist, std::size_t h) {
    std::vector<std::size_t> order(dist.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(h), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                      });
    order.resize(h);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

ScoreVector EnvelopeModel::squared_mahalanobis(const Matrix& points) const {
    if (points.cols() != location.size()) {
        throw std::invalid_argument("envelope: dimensionality mismatch");
    }
    Gaussian g;
    g.mean = location;
    g.chol.compute(covariance);
    return distances(points, g);
}

Predictions EnvelopeModel::predict(const ScoreVector& squared_distances) const {
    Predictions out(squared_distances.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = squared_distances[i] > threshold ? 1 : 0;
    }
    return out;
}

EnvelopeFit fit_envelope(const Matrix& train, std::uint64_t seed, const EnvelopeParams& params) {
    const auto n = static_cast<std::size_t>(train.rows());
    const auto d = static_cast<std::size_t>(train.cols());
    if (n <= d + 1) {
        throw std::invalid_argument("envelope: need more than D + 1 training rows (N = " +
                                    std::to_string(n) + ", D = " + std::to_string(d) + ")");
    }
    if (!(params.support_fraction > 0.0 && params.support_fraction <= 1.0)) {
        throw std::invalid_argument("envelope: support_fraction must lie in (0, 1]");
    }
    if (!(params.contamination > 0.0 && params.contamination < 0.5)) {
        throw std::invalid_argument("envelope: contamination must lie in (0, 0.5)");
    }
    if (params.trials == 0 || params.max_steps == 0) {
        throw std::invalid_argument("envelope: trials and max_steps must be positive");
    }

    const std::size_t h = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(params.support_fraction * static_cast<double>(n) - 1e-9)),
        d + 1, n);

    EnvelopeFit fit;
    fit.trial_log_dets.resize(params.trials);
    double best_log_det = std::numeric_limits<double>::infinity();
    Gaussian best;

    for (std::size_t t = 0; t < params.trials; ++t) {
        check_deadline();
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> subset = rng.sample_without_replacement(n, d + 2);
        std::sort(subset.begin(), subset.end());
        Gaussian current = estimate(train, subset);

        for (std::size_t step = 0; step < params.max_steps; ++step) {
            std::vector<std::size_t> next = closest(distances(train, current), h);
            if (next == subset) {
                break;
            }
            Gaussian refit = estimate(train, next);
            const bool improved = refit.log_det < current.log_det;
            subset = std::move(next);
            current = std::move(refit);
            fit.trial_log_dets[t].push_back(current.log_det);
            if (!improved && step > 0) {
                break;
            }
        }
        if (current.log_det < best_log_det) {
            best_log_det = current.log_det;
            best = current;
            fit.best_trial = t;
        }
    }

    EnvelopeModel& model = fit.model;
    model.location = best.mean;
    model.covariance = best.cov;
    model.log_det = best.log_det;
    model.support_fraction = params.support_fraction;
    model.contamination = params.contamination;
    const std::vector<double> train_d = distances(train, best);
    model.threshold = quantile(train_d, 1.0 - params.contamination);
    return fit;
}

EnvelopeResult envelope_run(const Dataset& train, const Dataset& test, std::uint64_t seed,
                            const EnvelopeParams& params) {
    if (train.dims() != test.dims()) {
        throw std::invalid_argument("envelope: train and test dimensionality differ");
    }
    const EnvelopeFit fit = fit_envelope(train.points(), seed, params);
    EnvelopeResult result;
    result.scores = fit.model.squared_mahalanobis(test.points());
    result.predictions = fit.model.predict(result.scores);
    return result;
}

}  // namespace treead
