#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "treead/dataset.hpp"

namespace treead {

struct Clustering {
    std::vector<std::size_t> assignments;
    Matrix centroids;  // k x D
    double inertia = 0.0;
    std::vector<std::size_t> sizes;
    std::size_t iterations = 0;
    /// Inertia after each Lloyd update. Non-increasing.
    std::vector<double> inertia_trace;
};

/// Lloyd's k-means from k-means++ seeding.
///
/// Stops when the largest centroid shift drops below tol or after max_iter
/// updates. Ties in assignment go to the lowest centroid index. A cluster that
/// empties out is re-seeded with the point farthest from its own centroid.
Clustering kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = 100, double tol = 1e-6);

/// Scott's rule: mean per-dimension sample standard deviation times
/// N^(-1/(D+4)). Throws when the reference has no spread.
double scott_bandwidth(const Matrix& reference);

/// Isotropic Gaussian kernel density of each query row against the reference.
std::vector<double> gaussian_kde(const Matrix& reference, const Matrix& queries,
                                 std::optional<double> bandwidth = std::nullopt);

}  // namespace treead
