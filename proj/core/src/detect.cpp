#include "treead/detect.hpp"

#include <array>
#include <utility>

#include "treead/rng.hpp"

namespace treead {
namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 5> kNames{{
    {Algorithm::MGBTAI, "mgbtai"},
    {Algorithm::DBTAI, "dbtai"},
    {Algorithm::IForest, "iforest"},
    {Algorithm::LOF, "lof"},
    {Algorithm::Envelope, "envelope"},
}};

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
    for (const auto& [a, name] : kNames) {
        if (a == algorithm) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (const auto& [a, n] : kNames) {
        if (n == name) {
            return a;
        }
    }
    return std::nullopt;
}

TrainProtocol train_protocol(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::MGBTAI:
    case Algorithm::DBTAI:
        return TrainProtocol::None;
    case Algorithm::IForest:
    case Algorithm::LOF:
    case Algorithm::Envelope:
        return TrainProtocol::TrainFractionAllTest;
    }
    return TrainProtocol::None;
}

DetectionResult detect(const Dataset& dataset, Algorithm algorithm, std::uint64_t seed,
                       const AlgorithmParams& params, const SplitOptions& split_options) {
    if (algorithm == Algorithm::MGBTAI || algorithm == Algorithm::DBTAI) {
        const TreePreset preset =
            algorithm == Algorithm::MGBTAI ? TreePreset::MGBTAI : TreePreset::DBTAI;
        return tree_detect(dataset, params.tree.value_or(preset_params(preset)), seed);
    }

    SplitSpec spec;
    spec.mode = train_protocol(algorithm) == TrainProtocol::NormalOnlyTrain
                    ? SplitMode::NormalOnlyTrain
                    : SplitMode::TrainFractionAllTest;
    spec.fraction = split_options.fraction;
    spec.contiguous = split_options.contiguous;
    spec.seed = derive_seed(seed, "split");
    const TrainTest parts = split(dataset, spec);

    DetectionResult result;
    switch (algorithm) {
    case Algorithm::IForest: {
        const auto model = IForestModel::fit(parts.train.points(), seed, params.iforest);
        result.scores = model.score(parts.test.points());
        result.threshold = params.iforest.score_threshold;
        break;
    }
    case Algorithm::LOF: {
        const auto model = LofModel::fit(parts.train.points(), params.lof);
        result.scores = model.score(parts.test.points());
        result.threshold = model.threshold();
        break;
    }
    case Algorithm::Envelope: {
        const auto fit = fit_envelope(parts.train.points(), seed, params.envelope);
        result.scores = fit.model.squared_mahalanobis(parts.test.points());
        result.threshold = fit.model.threshold;
        break;
    }
    default:
        break;
    }
    result.predictions.resize(result.scores.size());
    for (std::size_t i = 0; i < result.scores.size(); ++i) {
        result.predictions[i] = result.scores[i] > result.threshold ? 1 : 0;
    }
    return result;
}

}  // namespace treead
