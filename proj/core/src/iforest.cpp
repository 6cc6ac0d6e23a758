#include "treead/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treead/deadline.hpp"
#include "treead/rng.hpp"

namespace treead {
namespace {

constexpr double kEulerGamma = 0.5772156649;

struct Builder {
    const Matrix& data;
    Rng& rng;
    std::size_t max_depth;
    IForestModel::Tree tree;

    std::int32_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
        const auto id = static_cast<std::int32_t>(tree.size());
        tree.push_back({});
        tree[static_cast<std::size_t>(id)].size = rows.size();
        if (depth >= max_depth || rows.size() <= 1) {
            return id;
        }

        // Only features that still vary can split the node.
        std::vector<std::int32_t> candidates;
        std::vector<std::pair<double, double>> ranges;
        for (Eigen::Index f = 0; f < data.cols(); ++f) {
            double lo = data(static_cast<Eigen::Index>(rows[0]), f);
            double hi = lo;
            for (std::size_t r : rows) {
                const double v = data(static_cast<Eigen::Index>(r), f);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi > lo) {
                candidates.push_back(static_cast<std::int32_t>(f));
                ranges.emplace_back(lo, hi);
            }
        }
        if (candidates.empty()) {
            return id;
        }
        const std::size_t pick = rng.below(candidates.size());
        const auto [lo, hi] = ranges[pick];
        double split = rng.uniform(lo, hi);
        if (split <= lo) {
            split = lo;  // keeps at least the minimum on the left
        }
        const std::int32_t feature = candidates[pick];

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t r : rows) {
            (data(static_cast<Eigen::Index>(r), feature) <= split ? left : right).push_back(r);
        }
        if (right.empty()) {
            // Only possible through rounding at hi; route the maxima right.
            left.clear();
            for (std::size_t r : rows) {
                (data(static_cast<Eigen::Index>(r), feature) < hi ? left : right).push_back(r);
            }
            split = std::nextafter(hi, lo);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::int32_t l = grow(left, depth + 1);
        const std::int32_t r = grow(right, depth + 1);
        auto& node = tree[static_cast<std::size_t>(id)];
        node.feature = feature;
        node.split = split;
        node.left = l;
        node.right = r;
        return id;
    }
};

}  // namespace

double path_norm_c(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("path_norm_c: n must be positive");
    }
    if (n == 1) {
        return 0.0;
    }
    const auto nd = static_cast<double>(n);
    return 2.0 * (std::log(nd - 1.0) + kEulerGamma) - 2.0 * (nd - 1.0) / nd;
}

IForestModel IForestModel::fit(const Matrix& train, std::uint64_t seed, const IForestParams& params) {
    if (train.rows() == 0) {
        throw std::invalid_argument("iforest: empty training set");
    }
    if (params.n_trees == 0 || params.subsample == 0) {
        throw std::invalid_argument("iforest: n_trees and subsample must be positive");
    }
    IForestModel model;
    const auto n = static_cast<std::size_t>(train.rows());
    model.subsample_ = std::min(params.subsample, n);
    model.max_depth_ = static_cast<std::size_t>(
        std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(model.subsample_, 2)))));
    model.dims_ = static_cast<std::size_t>(train.cols());
    model.trees_.reserve(params.n_trees);

    for (std::size_t t = 0; t < params.n_trees; ++t) {
        check_deadline();
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> rows = rng.sample_without_replacement(n, model.subsample_);
        Builder builder{train, rng, model.max_depth_, {}};
        builder.grow(rows, 0);
        model.trees_.push_back(std::move(builder.tree));
    }
    return model;
}

double IForestModel::mean_path_length(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    double total = 0.0;
    for (const Tree& tree : trees_) {
        std::size_t node = 0;
        std::size_t depth = 0;
        while (tree[node].feature >= 0) {
            node = static_cast<std::size_t>(x(tree[node].feature) <= tree[node].split
                                                ? tree[node].left
                                                : tree[node].right);
            ++depth;
        }
        total += static_cast<double>(depth) + path_norm_c(tree[node].size);
    }
    return total / static_cast<double>(trees_.size());
}

ScoreVector IForestModel::score(const Matrix& points) const {
    if (static_cast<std::size_t>(points.cols()) != dims_) {
        throw std::invalid_argument("iforest: dimensionality mismatch");
    }
    const double norm = path_norm_c(subsample_);
    ScoreVector scores(static_cast<std::size_t>(points.rows()), 0.5);
    if (norm <= 0.0) {
        return scores;  // one-point forest: no path information
    }
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if (i % 256 == 0) {
            check_deadline();
        }
        scores[static_cast<std::size_t>(i)] = std::exp2(-mean_path_length(points.row(i)) / norm);
    }
    return scores;
}

ScoreVector iforest_run(const Dataset& train, const Dataset& test, std::uint64_t seed,
                        const IForestParams& params) {
    if (train.dims() != test.dims()) {
        throw std::invalid_argument("iforest: train and test dimensionality differ");
    }
    return IForestModel::fit(train.points(), seed, params).score(test.points());
}

}  // namespace treead
