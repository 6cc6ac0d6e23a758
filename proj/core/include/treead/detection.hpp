#pragma once

#include "treead/dataset.hpp"

namespace treead {

struct DetectionResult {
    ScoreVector scores;
    Predictions predictions;
    double threshold = 0.0;
};

}  // namespace treead
