#include "treead/tree_detectors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "treead/clustering.hpp"
#include "treead/deadline.hpp"
#include "treead/rng.hpp"
#include "treead/threshold.hpp"

namespace treead {
namespace {

constexpr std::uint64_t kRootPath = 0x5EEDF00DCAFEBABEULL;

std::uint64_t child_path(std::uint64_t parent_path, std::size_t child) {
    return splitmix64(parent_path ^ splitmix64(static_cast<std::uint64_t>(child) + 1));
}

Matrix gather(const Matrix& points, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), points.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

Vector mean_of(const Matrix& points, const std::vector<std::size_t>& rows) {
    Vector sum = Vector::Zero(points.cols());
    for (std::size_t r : rows) {
        sum += points.row(static_cast<Eigen::Index>(r)).transpose();
    }
    return sum / static_cast<double>(rows.size());
}

bool all_identical(const Matrix& points, const std::vector<std::size_t>& rows) {
    const auto first = points.row(static_cast<Eigen::Index>(rows.front()));
    return std::all_of(rows.begin() + 1, rows.end(), [&](std::size_t r) {
        return points.row(static_cast<Eigen::Index>(r)) == first;
    });
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

TreeParams TreeParams::mgbtai() {
    TreeParams p;
    p.min_cluster_frac = 0.20;
    p.leaf_level = 4;
    p.small_cluster_frac = 0.02;
    p.density_weighting = false;
    return p;
}

TreeParams TreeParams::dbtai() {
    TreeParams p;
    p.small_cluster_frac = 0.02;
    p.leaf_level = 3;
    p.min_cluster_frac = 0.10;
    p.branching = 2;
    p.split_threshold = 0.9;
    p.density_weighting = true;
    return p;
}

void TreeParams::validate() const {
    if (!(min_cluster_frac > 0.0 && min_cluster_frac < 1.0)) {
        throw std::invalid_argument("min_cluster_frac must lie in (0, 1)");
    }
    if (leaf_level < 1) {
        throw std::invalid_argument("leaf_level must be positive");
    }
    if (small_cluster_frac) {
        if (!(*small_cluster_frac > 0.0 && *small_cluster_frac < 1.0)) {
            throw std::invalid_argument("small_cluster_frac must lie in (0, 1)");
        }
        if (!(*small_cluster_frac < min_cluster_frac)) {
            throw std::invalid_argument("small_cluster_frac must be below min_cluster_frac");
        }
    }
    if (split_threshold && !(*split_threshold > 0.0 && *split_threshold <= 1.0)) {
        throw std::invalid_argument("split_threshold must lie in (0, 1]");
    }
    if (branching < 2) {
        throw std::invalid_argument("branching must be at least 2");
    }
}

std::string_view to_string(TreePreset preset) noexcept {
    return preset == TreePreset::MGBTAI ? "mgbtai" : "dbtai";
}

TreeParams preset_params(TreePreset preset) {
    return preset == TreePreset::MGBTAI ? TreeParams::mgbtai() : TreeParams::dbtai();
}

ClusterTree build_tree(const Matrix& points, const TreeParams& params, std::uint64_t seed) {
    params.validate();
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) {
        throw std::invalid_argument("build_tree: no points");
    }

    ClusterTree tree;
    tree.params = params;
    tree.leaf_of.assign(n, 0);

    TreeNode root;
    root.indices.resize(n);
    std::iota(root.indices.begin(), root.indices.end(), std::size_t{0});
    root.centroid = mean_of(points, root.indices);
    tree.nodes.push_back(std::move(root));

    const double min_size = params.min_cluster_frac * static_cast<double>(n);
    std::deque<std::pair<std::size_t, std::uint64_t>> pending{{0, kRootPath}};
    while (!pending.empty()) {
        check_deadline();
        const auto [id, path] = pending.front();
        pending.pop_front();

        const std::size_t size = tree.nodes[id].indices.size();
        const bool stop = tree.nodes[id].depth >= params.leaf_level ||
                          static_cast<double>(size) < min_size || size < params.branching ||
                          all_identical(points, tree.nodes[id].indices);
        if (stop) {
            continue;
        }

        const Matrix local = gather(points, tree.nodes[id].indices);
        const Clustering split = kmeans(local, params.branching, seed ^ path);
        const std::size_t largest = *std::max_element(split.sizes.begin(), split.sizes.end());
        if (params.split_threshold &&
            static_cast<double>(largest) >= *params.split_threshold * static_cast<double>(size)) {
            continue;  // degenerate split: keep the node whole
        }

        std::vector<TreeNode> children(params.branching);
        for (std::size_t i = 0; i < size; ++i) {
            children[split.assignments[i]].indices.push_back(tree.nodes[id].indices[i]);
        }
        for (std::size_t c = 0; c < params.branching; ++c) {
            children[c].depth = tree.nodes[id].depth + 1;
            children[c].centroid = mean_of(points, children[c].indices);
            const std::size_t child_id = tree.nodes.size();
            tree.nodes[id].children.push_back(child_id);
            tree.nodes.push_back(std::move(children[c]));
            pending.emplace_back(child_id, child_path(path, c));
        }
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        if (tree.nodes[id].is_leaf()) {
            tree.leaves.push_back(id);
            for (std::size_t idx : tree.nodes[id].indices) {
                tree.leaf_of[idx] = id;
            }
        }
    }
    return tree;
}

ScoreVector ecblof_scores(const ClusterTree& tree, const Matrix& points) {
    const std::size_t n = tree.point_count();
    if (static_cast<std::size_t>(points.rows()) != n) {
        throw std::invalid_argument("ecblof_scores: tree was built over a different point set");
    }

    const auto& params = tree.params;
    auto is_large = [&](std::size_t leaf) {
        return !params.small_cluster_frac ||
               static_cast<double>(tree.nodes[leaf].indices.size()) >=
                   *params.small_cluster_frac * static_cast<double>(n);
    };
    std::vector<std::size_t> large;
    for (std::size_t leaf : tree.leaves) {
        if (is_large(leaf)) {
            large.push_back(leaf);
        }
    }

    ScoreVector scores(n, 0.0);
    for (std::size_t leaf : tree.leaves) {
        const bool redirect = !large.empty() && !is_large(leaf);
        for (std::size_t idx : tree.nodes[leaf].indices) {
            const auto row = points.row(static_cast<Eigen::Index>(idx)).transpose();
            if (!redirect) {
                scores[idx] = (row - tree.nodes[leaf].centroid).norm();
                continue;
            }
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t other : large) {
                nearest = std::min(nearest, (row - tree.nodes[other].centroid).norm());
            }
            scores[idx] = nearest;
        }
    }
    return scores;
}

std::vector<LeafWeight> leaf_weights(const ClusterTree& tree, const Matrix& points,
                                     std::optional<double> bandwidth) {
    if (static_cast<std::size_t>(points.rows()) != tree.point_count()) {
        throw std::invalid_argument("leaf_weights: tree was built over a different point set");
    }
    std::vector<LeafWeight> weights(tree.leaves.size());
    if (tree.leaves.size() == 1) {
        return weights;
    }

    const std::vector<double> density = gaussian_kde(points, points, bandwidth);
    std::size_t largest = 0;
    std::vector<double> means;
    for (std::size_t l = 0; l < tree.leaves.size(); ++l) {
        const auto& members = tree.nodes[tree.leaves[l]].indices;
        double sum = 0.0;
        for (std::size_t idx : members) {
            sum += density[idx];
        }
        weights[l].mean_density = sum / static_cast<double>(members.size());
        means.push_back(weights[l].mean_density);
        largest = std::max(largest, members.size());
    }
    const double median = median_of(means);
    if (!(median > 0.0) || !std::isfinite(median)) {
        throw std::domain_error(
            "density weighting: leaf densities underflowed; pass an explicit bandwidth");
    }
    for (std::size_t l = 0; l < tree.leaves.size(); ++l) {
        weights[l].density_ratio = weights[l].mean_density / median;
        weights[l].imbalance = static_cast<double>(tree.nodes[tree.leaves[l]].indices.size()) /
                               static_cast<double>(largest);
    }
    return weights;
}

ScoreVector density_weight_scores(std::span<const double> raw, const ClusterTree& tree,
                                  const Matrix& points, std::optional<double> bandwidth) {
    if (raw.size() != tree.point_count()) {
        throw std::invalid_argument("density_weight_scores: score count does not match tree");
    }
    const auto weights = leaf_weights(tree, points, bandwidth);
    std::vector<double> factor(tree.nodes.size(), 1.0);
    for (std::size_t l = 0; l < tree.leaves.size(); ++l) {
        factor[tree.leaves[l]] = weights[l].density_ratio * weights[l].imbalance;
    }
    ScoreVector weighted(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        weighted[i] = raw[i] * factor[tree.leaf_of[i]];
    }
    return weighted;
}

DetectionResult tree_detect(const Dataset& dataset, const TreeParams& params, std::uint64_t seed) {
    const Matrix& points = dataset.points();
    const ClusterTree tree = build_tree(points, params, seed);
    ScoreVector scores = ecblof_scores(tree, points);

    const bool any_positive = std::any_of(scores.begin(), scores.end(), [](double s) { return s > 0.0; });
    if (params.density_weighting && any_positive) {
        scores = density_weight_scores(scores, tree, points);
    }

    ThresholdResult thr = knee_predict(scores);
    return DetectionResult{std::move(scores), std::move(thr.predictions), thr.threshold};
}

DetectionResult tree_detect(const Dataset& dataset, TreePreset preset, std::uint64_t seed) {
    return tree_detect(dataset, preset_params(preset), seed);
}

}  // namespace treead
