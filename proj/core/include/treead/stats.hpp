#pragma once

#include <span>

namespace treead {

/// Linearly interpolated quantile, q in [0, 1] (the "linear" percentile rule).
double quantile(std::span<const double> values, double q);

}  // namespace treead
