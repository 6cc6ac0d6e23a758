#include "treead/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace treead {

Confusion confusion(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth) {
    if (predicted.size() != truth.size()) {
        throw std::invalid_argument("confusion: prediction length " +
                                    std::to_string(predicted.size()) + " != truth length " +
                                    std::to_string(truth.size()));
    }
    Confusion c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i] > 1 || truth[i] > 1) {
            throw std::invalid_argument("confusion: values must be 0 or 1");
        }
        if (truth[i]) {
            (predicted[i] ? c.tp : c.fn)++;
        } else {
            (predicted[i] ? c.fp : c.tn)++;
        }
    }
    return c;
}

MetricBundle prf1(const Confusion& c) {
    MetricBundle m;
    if (c.tp + c.fp > 0) {
        m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
        m.precision_defined = true;
    }
    if (c.tp + c.fn > 0) {
        m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        m.recall_defined = true;
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    m.f1_defined = m.precision_defined && m.recall_defined;
    return m;
}

std::optional<double> auc_roc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    if (scores.size() != truth.size()) {
        throw std::invalid_argument("auc_roc: score and truth lengths differ");
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney U with mid-ranks. Twice the rank sum stays integral, so the
    // tie halves are exact.
    std::uint64_t positives = 0;
    std::uint64_t twice_rank_sum = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        // ranks i+1 .. j share the mid-rank (i+1+j)/2
        const std::uint64_t twice_mid = static_cast<std::uint64_t>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            if (truth[order[t]]) {
                ++positives;
                twice_rank_sum += twice_mid;
            }
        }
        i = j;
    }
    const std::uint64_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        return std::nullopt;
    }
    // 2U = 2R - P(P+1); AUC = U / (P Q)
    const std::uint64_t twice_u = twice_rank_sum - positives * (positives + 1);
    return static_cast<double>(twice_u) / (2.0 * static_cast<double>(positives) *
                                           static_cast<double>(negatives));
}

double run_stddev(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("run_stddev: need at least two runs");
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / (n - 1.0));
}

MetricBundle evaluate(std::span<const double> scores, std::span<const std::uint8_t> predicted,
                      std::span<const std::uint8_t> truth) {
    MetricBundle m = prf1(confusion(predicted, truth));
    if (const auto auc = auc_roc(scores, truth)) {
        m.auc_roc = *auc;
        m.auc_defined = true;
    }
    return m;
}

}  // namespace treead
