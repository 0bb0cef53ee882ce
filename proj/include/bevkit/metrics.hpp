#pragma once

#include <span>

#include "bevkit/heatmap.hpp"
#include "bevkit/risk.hpp"

namespace bevkit {

struct NmsConfig {
    int window = 5;          // odd suppression window, px
    double threshold = 1e-3; // minimum peak value kept
};

// Peak extraction: a pixel survives when it is >= every neighbor in the
// window, strictly greater than those preceding it in row-major order
// (so plateaus keep exactly their first pixel), and >= threshold.
// Survivors are converted to world coordinates through the map's grid
// and returned in row-major detection order.
KeypointSet extract_locations(const Heatmap& bev, const NmsConfig& cfg = {});

struct LocalizationResult {
    double chamfer_m = 0.0;         // symmetric Chamfer distance, meters
    double chamfer_normalized = 0.0; // Chamfer over 2 * d0, unitless
};

// Symmetric Chamfer distance between world-frame point sets: the mean
// nearest-neighbor distance from each set to the other, summed. Empty vs
// empty is zero; exactly one empty set throws UndefinedMetric.
LocalizationResult chamfer(const KeypointSet& predicted, const KeypointSet& truth,
                           double d0_m);

// Intersection over union of two masks; 1.0 when both are empty.
double risk_iou(const BinaryMask& predicted, const BinaryMask& truth);

// Mean squared error between paired global risk values.
double global_risk_mse(std::span<const double> predicted, std::span<const double> truth);

} // namespace bevkit
