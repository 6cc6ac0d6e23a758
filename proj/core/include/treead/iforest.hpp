#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "treead/dataset.hpp"

namespace treead {

/// Average unsuccessful-search path length in a binary search tree of n
/// items: c(1) = 0, c(n) = 2 (ln(n-1) + gamma) - 2 (n-1)/n.
double path_norm_c(std::size_t n);

struct IForestParams {
    std::size_t n_trees = 100;
    std::size_t subsample = 256;
    /// Scores above this are predicted anomalous (0.5 is the "auto" offset).
    double score_threshold = 0.5;
};

class IForestModel {
public:
    struct Node {
        std::int32_t feature = -1;  // -1 marks a leaf
        double split = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::size_t size = 0;
    };
    using Tree = std::vector<Node>;

    static IForestModel fit(const Matrix& train, std::uint64_t seed, const IForestParams& params = {});

    /// 2^(-E[h(x)] / c(subsample)) per row.
    ScoreVector score(const Matrix& points) const;

    /// Expected path length over the forest, with c(size) added at leaves.
    double mean_path_length(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

    const std::vector<Tree>& trees() const noexcept { return trees_; }
    std::size_t subsample() const noexcept { return subsample_; }
    std::size_t max_depth() const noexcept { return max_depth_; }
    std::size_t dims() const noexcept { return dims_; }

private:
    std::vector<Tree> trees_;
    std::size_t subsample_ = 0;
    std::size_t max_depth_ = 0;
    std::size_t dims_ = 0;
};

ScoreVector iforest_run(const Dataset& train, const Dataset& test, std::uint64_t seed,
                        const IForestParams& params = {});

}  // namespace treead
