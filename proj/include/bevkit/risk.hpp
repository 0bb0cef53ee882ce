#pragma once

#include <cstdint>
#include <vector>

#include "bevkit/heatmap.hpp"

namespace bevkit {

struct RiskConfig {
    double d0_m = 1.5; // distance threshold, meters
    double r0 = 2.0;   // occupancy threshold on the risk map, count

    // Throws DegenerateGeometry when d0 <= 0 or r0 < 1.
    void validate() const;
};

// Dense 0/1 raster, row major.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    std::uint8_t at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    // Number of set pixels.
    std::int64_t area() const;
};

enum class ConvPath {
    Auto,   // picks Direct or Fft from the sparsity of the input
    Direct, // exact scatter over the disk support
    Fft,    // zero-padded FFT convolution
};

// Risk map R = M * K with K the flat disk of world radius d0: R(p) sums
// the mass whose pixel center lies within d0 of p. Both paths agree to
// tight tolerance; Direct is bit-exact for sparse maps. Throws
// KernelTooLarge when the pixel radius exceeds the raster extent.
Heatmap risk_map(const Heatmap& bev, const RiskConfig& cfg,
                 ConvPath path = ConvPath::Auto);

// Thresholded occupancy mask R >= r0. The comparison tolerates 1e-6 of
// arithmetic dust below r0 so that exact-count plateaus (an isolated
// pair sits at exactly 2.0) classify deterministically across
// convolution paths and float32 round trips.
BinaryMask risk_mask(const Heatmap& risk, const RiskConfig& cfg);

// Global risk density: the mass lying in the mask region, normalized by
// the grid's metric area s^2 H W.
double global_risk(const Heatmap& bev, const Heatmap& risk, const RiskConfig& cfg);
double global_risk(const Heatmap& bev, const RiskConfig& cfg,
                   ConvPath path = ConvPath::Auto);

// Per-person risk: the risk map sampled bilinearly at each BEV position.
// A person alone still counts itself, so values start at ~1.
std::vector<double> individual_risks(const KeypointSet& persons_bev,
                                     const Heatmap& risk);

} // namespace bevkit
