#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "treead/dataset.hpp"

namespace treead {

/// Raised when every score is zero and the cumulative curve cannot be normalized.
class DegenerateScores : public std::invalid_argument {
public:
    DegenerateScores() : std::invalid_argument("all scores are zero; cumulative curve undefined") {}
};

/// Sorted scores (xs) against their normalized cumulative percentage (ys).
struct CumulativeCurve {
    std::vector<double> xs;
    std::vector<double> ys;
};

CumulativeCurve cumulative_curve(std::span<const double> scores);

struct KneePoint {
    double threshold = 0.0;
    double knee_percent = 0.0;
    std::size_t index = 0;
    /// False when the curve has no interior knee and the threshold fell back to
    /// the largest score.
    bool interior = false;
};

/// The curve point lying farthest above the chord joining its two ends.
/// Ties go to the smallest index.
KneePoint knee_threshold(const CumulativeCurve& curve);

/// 1 where score > threshold.
Predictions apply_threshold(std::span<const double> scores, double threshold);

struct ThresholdResult {
    double threshold = 0.0;
    Predictions predictions;
    bool degenerate = false;
};

/// cumulative_curve -> knee_threshold -> apply_threshold. All-zero scores yield
/// threshold 0 and no predicted anomalies.
ThresholdResult knee_predict(std::span<const double> scores);

}  // namespace treead
