#include "treead/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace treead {

CumulativeCurve cumulative_curve(std::span<const double> scores) {
    if (scores.empty()) {
        throw std::invalid_argument("cumulative_curve: no scores");
    }
    CumulativeCurve curve;
    curve.xs.assign(scores.begin(), scores.end());
    for (double s : curve.xs) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("cumulative_curve: scores must be finite and nonnegative");
        }
    }
    std::sort(curve.xs.begin(), curve.xs.end());

    curve.ys.resize(curve.xs.size());
    double running = 0.0;
    for (std::size_t j = 0; j < curve.xs.size(); ++j) {
        running += curve.xs[j];
        curve.ys[j] = running;
    }
    const double total = running;
    if (total <= 0.0) {
        throw DegenerateScores();
    }
    for (double& y : curve.ys) {
        y = y / total * 100.0;
    }
    curve.ys.back() = 100.0;
    return curve;
}

KneePoint knee_threshold(const CumulativeCurve& curve) {
    const std::size_t n = curve.xs.size();
    if (n == 0 || curve.ys.size() != n) {
        throw std::invalid_argument("knee_threshold: malformed curve");
    }
    KneePoint fallback{curve.xs.back(), curve.ys.back(), n - 1, false};
    if (n < 3) {
        return fallback;
    }

    const double x0 = curve.xs.front();
    const double y0 = curve.ys.front();
    const double dx = curve.xs.back() - x0;
    const double dy = curve.ys.back() - y0;
    if (dx <= 0.0) {
        return fallback;  // every score equal
    }
    const double slope = dy / dx;

    std::size_t best = 0;
    double best_dev = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double dev = curve.ys[j] - (y0 + slope * (curve.xs[j] - x0));
        if (dev > best_dev) {
            best_dev = dev;
            best = j;
        }
    }
    if (best_dev <= 0.0) {
        return fallback;
    }
    return KneePoint{curve.xs[best], curve.ys[best], best, true};
}

Predictions apply_threshold(std::span<const double> scores, double threshold) {
    Predictions out(scores.size(), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = scores[i] > threshold ? 1 : 0;
    }
    return out;
}

ThresholdResult knee_predict(std::span<const double> scores) {
    ThresholdResult result;
    try {
        const KneePoint knee = knee_threshold(cumulative_curve(scores));
        result.threshold = knee.threshold;
    } catch (const DegenerateScores&) {
        result.degenerate = true;
        result.threshold = 0.0;
    }
    result.predictions = apply_threshold(scores, result.threshold);
    return result;
}

}  // namespace treead
