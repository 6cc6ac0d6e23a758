#pragma once

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "treead/dataset.hpp"
#include "treead/rng.hpp"

namespace fixtures {

inline treead::Matrix to_matrix(const oracle::Rows& rows) {
    treead::Matrix m(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

inline oracle::Rows to_rows(const treead::Matrix& m) {
    oracle::Rows rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rows[static_cast<std::size_t>(i)].push_back(m(i, j));
        }
    }
    return rows;
}

inline treead::Matrix column(std::initializer_list<double> values) {
    treead::Matrix m(static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index i = 0;
    for (double v : values) m(i++, 0) = v;
    return m;
}

/// n x d standard normal cloud.
inline treead::Matrix gaussian(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
    treead::Rng rng(seed);
    treead::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = scale * rng.normal();
        }
    }
    return m;
}

inline treead::Dataset unlabeled(treead::Matrix m) {
    return treead::Dataset("fixture", std::move(m));
}

}  // namespace fixtures
