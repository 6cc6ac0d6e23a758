#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "treead/dataset.hpp"
#include "treead/detection.hpp"
#include "treead/envelope.hpp"
#include "treead/iforest.hpp"
#include "treead/lof.hpp"
#include "treead/tree_detectors.hpp"

namespace treead {

enum class Algorithm { MGBTAI, DBTAI, IForest, LOF, Envelope };

std::string_view to_string(Algorithm algorithm) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// How an algorithm consumes data. The tree detectors need no training split;
/// the baselines fit on a sample of all rows and score the whole dataset.
enum class TrainProtocol { None, TrainFractionAllTest, NormalOnlyTrain };

TrainProtocol train_protocol(Algorithm algorithm) noexcept;

struct AlgorithmParams {
    std::optional<TreeParams> tree;  // defaults to the algorithm's preset
    IForestParams iforest;
    LofParams lof;
    EnvelopeParams envelope;
};

struct SplitOptions {
    double fraction = 0.7;
    bool contiguous = false;
};

/// Runs one algorithm end to end: split per its protocol, fit, score every
/// row of the dataset, threshold. Deterministic in (dataset, algorithm,
/// params, seed).
DetectionResult detect(const Dataset& dataset, Algorithm algorithm, std::uint64_t seed,
                       const AlgorithmParams& params = {}, const SplitOptions& split = {});

}  // namespace treead
