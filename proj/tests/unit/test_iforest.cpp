#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "treead/iforest.hpp"

using namespace treead;

namespace {

std::size_t tree_depth(const IForestModel::Tree& t, std::int32_t node, std::size_t d) {
    const auto& n = t[static_cast<std::size_t>(node)];
    if (n.feature < 0) return d;
    return std::max(tree_depth(t, n.left, d + 1), tree_depth(t, n.right, d + 1));
}

}  // namespace

TEST(PathNorm, KnownValues) {
    EXPECT_EQ(path_norm_c(1), 0.0);
    EXPECT_NEAR(path_norm_c(2), 0.1544, 1e-4);
    EXPECT_NEAR(path_norm_c(2), 2.0 * 0.5772156649 - 1.0, 1e-10);
    EXPECT_NEAR(path_norm_c(256), 10.244, 1e-3);
    EXPECT_NEAR(path_norm_c(256), 2.0 * (std::log(255.0) + 0.5772156649) - 510.0 / 256.0, 1e-9);
    EXPECT_THROW(path_norm_c(0), std::invalid_argument);
}

TEST(IForest, Shape) {
    const Matrix x = fixtures::gaussian(1000, 3, 1);
    const auto m = IForestModel::fit(x, 0);
    EXPECT_EQ(m.trees().size(), 100u);
    EXPECT_EQ(m.subsample(), 256u);
    EXPECT_EQ(m.max_depth(), 8u);
    for (const auto& t : m.trees()) {
        EXPECT_LE(tree_depth(t, 0, 0), m.max_depth());
        EXPECT_EQ(t[0].size, 256u);
        for (const auto& n : t) {
            if (n.feature >= 0) {
                EXPECT_EQ(n.size, t[static_cast<std::size_t>(n.left)].size + t[static_cast<std::size_t>(n.right)].size);
            }
        }
    }
}

TEST(IForest, SmallTrainUsesAllRows) {
    const Matrix x = fixtures::gaussian(40, 2, 1);
    const auto m = IForestModel::fit(x, 0);
    EXPECT_EQ(m.subsample(), 40u);
    EXPECT_EQ(m.max_depth(), 6u);
}

TEST(IForest, SplitsLieWithinNodeRange) {
    // Route the training rows through each tree: every split value must fall
    // inside the range of the rows reaching that node.
    const Matrix x = fixtures::gaussian(200, 2, 6);
    const auto m = IForestModel::fit(x, 3);
    for (const auto& t : m.trees()) {
        std::vector<std::vector<Eigen::Index>> at(t.size());
        for (Eigen::Index i = 0; i < x.rows(); ++i) at[0].push_back(i);
        for (std::size_t id = 0; id < t.size(); ++id) {
            const auto& n = t[id];
            if (n.feature < 0 || at[id].empty()) continue;
            double lo = INFINITY;
            double hi = -INFINITY;
            for (auto i : at[id]) {
                lo = std::min(lo, x(i, n.feature));
                hi = std::max(hi, x(i, n.feature));
                at[static_cast<std::size_t>(x(i, n.feature) <= n.split ? n.left : n.right)].push_back(i);
            }
            EXPECT_GE(n.split, lo);
            EXPECT_LE(n.split, hi);
        }
    }
}

TEST(IForest, IdenticalPointsScoreEqually) {
    const Matrix x = Matrix::Constant(50, 2, 4.0);
    const auto s = IForestModel::fit(x, 0).score(x);
    for (double v : s) EXPECT_EQ(v, s[0]);
}

TEST(IForest, FarPointScoresHighest) {
    Matrix x(501, 4);
    x.topRows(500) = fixtures::gaussian(500, 4, 22);
    x.row(500).setConstant(10.0 / 2.0);  // norm 10
    const auto s = IForestModel::fit(x, 5).score(x);
    EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), 500);
}

TEST(IForest, ScoreRange) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matrix x = fixtures::gaussian(20 + seed * 5, 1 + seed % 4, seed, 1.0 + seed);
        const auto s = IForestModel::fit(x, seed).score(x);
        for (double v : s) {
            ASSERT_GT(v, 0.0);
            ASSERT_LT(v, 1.0);
        }
    }
}

TEST(IForest, DeeperPathLowerScore) {
    const Matrix x = fixtures::gaussian(300, 2, 4);
    const auto m = IForestModel::fit(x, 1);
    const auto s = m.score(x);
    std::vector<std::pair<double, double>> hs;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        hs.emplace_back(m.mean_path_length(x.row(i)), s[static_cast<std::size_t>(i)]);
        EXPECT_NEAR(s[static_cast<std::size_t>(i)],
                    std::pow(2.0, -hs.back().first / path_norm_c(256)), 1e-12);
    }
    std::sort(hs.begin(), hs.end());
    for (std::size_t i = 1; i < hs.size(); ++i) EXPECT_LE(hs[i].second, hs[i - 1].second);
}

TEST(IForest, DeterministicAndSeedSensitive) {
    const Matrix x = fixtures::gaussian(300, 3, 9);
    const auto a = IForestModel::fit(x, 1).score(x);
    EXPECT_EQ(a, IForestModel::fit(x, 1).score(x));
    EXPECT_NE(a, IForestModel::fit(x, 2).score(x));
}

TEST(IForest, Rejections) {
    EXPECT_THROW(IForestModel::fit(Matrix(0, 2), 0), std::invalid_argument);
    const auto m = IForestModel::fit(fixtures::gaussian(10, 2, 0), 0);
    EXPECT_THROW(m.score(Matrix::Zero(1, 3)), std::invalid_argument);
}

TEST(IForest, RunScoresEveryTestRow) {
    const Dataset train("tr", fixtures::gaussian(100, 2, 1));
    const Dataset test("te", fixtures::gaussian(37, 2, 2));
    EXPECT_EQ(iforest_run(train, test, 0).size(), 37u);
}
