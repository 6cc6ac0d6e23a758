#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "treead/dataset.hpp"
#include "treead/detection.hpp"

namespace treead {

/// Shape and scoring parameters for the cluster-tree detectors.
struct TreeParams {
    /// Nodes holding fewer than this fraction of N are not split.
    double min_cluster_frac = 0.20;
    /// Maximum depth; the root sits at depth 0.
    std::size_t leaf_level = 4;
    /// Leaves below this fraction of N are scored against the nearest large leaf.
    std::optional<double> small_cluster_frac;
    /// A split is rejected when its larger child would hold at least this
    /// fraction of the parent's points.
    std::optional<double> split_threshold;
    std::size_t branching = 2;
    bool density_weighting = false;

    static TreeParams mgbtai();
    static TreeParams dbtai();

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

enum class TreePreset { MGBTAI, DBTAI };

std::string_view to_string(TreePreset preset) noexcept;
TreeParams preset_params(TreePreset preset);

struct TreeNode {
    std::vector<std::size_t> indices;
    Vector centroid;
    std::size_t depth = 0;
    std::vector<std::size_t> children;  // empty for leaves

    bool is_leaf() const noexcept { return children.empty(); }
};

struct ClusterTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<std::size_t> leaves;
    /// Leaf node id for each input point.
    std::vector<std::size_t> leaf_of;
    TreeParams params;

    std::size_t point_count() const noexcept { return leaf_of.size(); }
};

/// Recursive 2-means partition. Child k-means seeds come from the parent seed
/// mixed with the child's path from the root, so a subtree's shape does not
/// depend on the order nodes are expanded in.
ClusterTree build_tree(const Matrix& points, const TreeParams& params, std::uint64_t seed);

/// Distance from each point to its leaf centroid. With small_cluster_frac set,
/// members of small leaves are measured against the nearest large-leaf
/// centroid instead.
ScoreVector ecblof_scores(const ClusterTree& tree, const Matrix& points);

struct LeafWeight {
    double mean_density = 0.0;
    double density_ratio = 1.0;
    double imbalance = 1.0;
};

/// Per-leaf weights, indexed like ClusterTree::leaves.
std::vector<LeafWeight> leaf_weights(const ClusterTree& tree, const Matrix& points,
                                     std::optional<double> bandwidth = std::nullopt);

/// raw * (leaf density / median leaf density) * (leaf size / largest leaf size).
ScoreVector density_weight_scores(std::span<const double> raw, const ClusterTree& tree,
                                  const Matrix& points,
                                  std::optional<double> bandwidth = std::nullopt);

/// Full unsupervised run over the whole dataset: tree, scores, knee threshold.
DetectionResult tree_detect(const Dataset& dataset, TreePreset preset, std::uint64_t seed);
DetectionResult tree_detect(const Dataset& dataset, const TreeParams& params, std::uint64_t seed);

}  // namespace treead
