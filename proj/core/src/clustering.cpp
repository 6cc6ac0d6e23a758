#include "treead/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "treead/deadline.hpp"
#include "treead/rng.hpp"

namespace treead {
namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
    return (a.row(i) - b.row(j)).squaredNorm();
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
    const auto n = static_cast<std::size_t>(points.rows());
    Matrix centroids(static_cast<Eigen::Index>(k), points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.below(n)));

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(points, static_cast<Eigen::Index>(i),
                                                               centroids,
                                                               static_cast<Eigen::Index>(c - 1)));
            total += nearest[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += nearest[i];
                if (acc > target && nearest[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);
        }
        centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    }
    return centroids;
}

// Assigns every point to its nearest centroid and returns the inertia.
double assign(const Matrix& points, const Matrix& centroids, std::vector<std::size_t>& assignments,
              std::vector<double>& distances) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        std::size_t best = 0;
        double best_d = squared_distance(points, i, centroids, 0);
        for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
            const double d = squared_distance(points, i, centroids, c);
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::size_t>(c);
            }
        }
        assignments[static_cast<std::size_t>(i)] = best;
        distances[static_cast<std::size_t>(i)] = best_d;
        inertia += best_d;
    }
    return inertia;
}

std::vector<std::size_t> cluster_sizes(const std::vector<std::size_t>& assignments, std::size_t k) {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t a : assignments) {
        ++sizes[a];
    }
    return sizes;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
void repair_empty(const Matrix& points, Matrix& centroids, std::vector<std::size_t>& assignments,
                  std::vector<double>& distances) {
    const auto k = static_cast<std::size_t>(centroids.rows());
    auto sizes = cluster_sizes(assignments, k);
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] != 0) {
            continue;
        }
        std::size_t far = assignments.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (sizes[assignments[i]] > 1 && distances[i] > far_d) {
                far_d = distances[i];
                far = i;
            }
        }
        if (far == assignments.size()) {
            break;  // fewer points than clusters; cannot happen when N >= k
        }
        --sizes[assignments[far]];
        assignments[far] = c;
        distances[far] = 0.0;
        sizes[c] = 1;
        centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
    }
}

Matrix recompute_centroids(const Matrix& points, const std::vector<std::size_t>& assignments,
                           std::size_t k) {
    Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        sums.row(static_cast<Eigen::Index>(assignments[i])) += points.row(static_cast<Eigen::Index>(i));
        ++counts[assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        sums.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
    }
    return sums;
}

double inertia_of(const Matrix& points, const Matrix& centroids,
                  const std::vector<std::size_t>& assignments) {
    double total = 0.0;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        total += squared_distance(points, static_cast<Eigen::Index>(i), centroids,
                                  static_cast<Eigen::Index>(assignments[i]));
    }
    return total;
}

}  // namespace

Clustering kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iter,
                  double tol) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k == 0) {
        throw std::invalid_argument("kmeans: k must be positive");
    }
    if (k > n) {
        throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " exceeds N = " +
                                    std::to_string(n));
    }
    if (max_iter == 0) {
        throw std::invalid_argument("kmeans: max_iter must be positive");
    }
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("kmeans: tol must be nonnegative");
    }
    if (!points.allFinite()) {
        throw std::invalid_argument("kmeans: points must be finite");
    }

    Rng rng(seed);
    Clustering result;
    result.assignments.assign(n, 0);
    std::vector<double> distances(n, 0.0);
    Matrix centroids = seed_plus_plus(points, k, rng);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        check_deadline();
        assign(points, centroids, result.assignments, distances);
        repair_empty(points, centroids, result.assignments, distances);
        Matrix updated = recompute_centroids(points, result.assignments, k);
        const double shift = (updated - centroids).rowwise().norm().maxCoeff();
        centroids = std::move(updated);
        result.inertia_trace.push_back(inertia_of(points, centroids, result.assignments));
        result.iterations = iter + 1;
        if (shift < tol) {
            break;
        }
    }

    // Final nearest-centroid pass so assignments agree with the returned centroids.
    assign(points, centroids, result.assignments, distances);
    repair_empty(points, centroids, result.assignments, distances);
    result.inertia = inertia_of(points, centroids, result.assignments);
    result.sizes = cluster_sizes(result.assignments, k);
    result.centroids = std::move(centroids);
    return result;
}

double scott_bandwidth(const Matrix& reference) {
    const auto n = reference.rows();
    const auto d = reference.cols();
    if (n == 0 || d == 0) {
        throw std::invalid_argument("bandwidth: empty reference");
    }
    double sigma = 0.0;
    if (n > 1) {
        const Eigen::RowVectorXd mean = reference.colwise().mean();
        for (Eigen::Index j = 0; j < d; ++j) {
            const double ss = (reference.col(j).array() - mean(j)).square().sum();
            sigma += std::sqrt(ss / static_cast<double>(n - 1));
        }
        sigma /= static_cast<double>(d);
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument(
            "bandwidth: reference has zero variance; pass an explicit bandwidth");
    }
    return sigma * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
}

std::vector<double> gaussian_kde(const Matrix& reference, const Matrix& queries,
                                 std::optional<double> bandwidth) {
    if (reference.rows() == 0) {
        throw std::invalid_argument("gaussian_kde: empty reference");
    }
    if (queries.rows() > 0 && queries.cols() != reference.cols()) {
        throw std::invalid_argument("gaussian_kde: query dimensionality differs from reference");
    }
    if (bandwidth && !(*bandwidth > 0.0)) {
        throw std::invalid_argument("gaussian_kde: bandwidth must be positive");
    }
    const double h = bandwidth ? *bandwidth : scott_bandwidth(reference);
    const auto dims = static_cast<double>(reference.cols());
    const double norm = 1.0 / (static_cast<double>(reference.rows()) *
                               std::pow(h * std::sqrt(2.0 * std::numbers::pi), dims));
    const double inv_two_h2 = 1.0 / (2.0 * h * h);

    std::vector<double> density(static_cast<std::size_t>(queries.rows()), 0.0);
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        check_deadline();
        double sum = 0.0;
        for (Eigen::Index i = 0; i < reference.rows(); ++i) {
            sum += std::exp(-(queries.row(q) - reference.row(i)).squaredNorm() * inv_two_h2);
        }
        density[static_cast<std::size_t>(q)] = norm * sum;
    }
    return density;
}

}  // namespace treead
