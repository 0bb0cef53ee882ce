#pragma once

#include <vector>

#include "bevkit/heatmap.hpp"

namespace bevkit {

// Candidate head-plane heights for the group transform, strictly
// increasing and strictly below the camera.
struct PlaneStack {
    std::vector<double> plane_heights_m;

    // Eight planes from 1.1 m to 1.8 m in 0.1 m steps.
    static PlaneStack default_head_planes();

    std::size_t size() const { return plane_heights_m.size(); }

    // Throws DegenerateGeometry when empty, not strictly increasing, or
    // reaching the camera height.
    void validate(double camera_height_m) const;
};

// Per-plane, per-pixel weights [plane][row][col]. The group transform
// requires weights normalized over the plane axis at every pixel.
struct AttentionWeights {
    int n_planes = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;
    bool normalized = false;

    static AttentionWeights uniform(int n_planes, int height, int width);
    static AttentionWeights one_hot(int plane, int n_planes, int height, int width);
    static AttentionWeights from_logits(int n_planes, int height, int width,
                                        std::vector<double> logits);

    double& at(int plane, int row, int col) {
        return data[(static_cast<std::size_t>(plane) * height + row) * width + col];
    }
    double at(int plane, int row, int col) const {
        return data[(static_cast<std::size_t>(plane) * height + row) * width + col];
    }

    void validate() const;
};

// Softmax over the plane axis at each pixel (max-subtracted, so constant
// per-pixel shifts of the logits leave the result unchanged). Output
// sums to 1 across planes everywhere.
AttentionWeights softmax_normalize(const AttentionWeights& logits);

// Resamples `src` into a dst_height x dst_width raster: each destination
// pixel pulls src at src_from_dst * (u, v) with bilinear interpolation
// and zero padding. Pure resampling; mass is not conserved in general.
Heatmap warp_with_homography(const Heatmap& src, const Homography& src_from_dst,
                             Frame dst_frame, int dst_height, int dst_width,
                             const std::optional<BevGrid>& dst_grid = std::nullopt);

// Warps an image-frame map onto the BEV grid through the horizontal
// plane at plane_height_m.
Heatmap warp_to_bev(const Heatmap& image_map, const CameraIntrinsics& intr,
                    const CameraPose& pose, const BevGrid& grid,
                    double plane_height_m = 0.0);

// Group transform for head maps: warps the map through every candidate
// plane and blends the warps with the attention weights, in plane order.
// Requires normalized weights matching the grid dimensions.
Heatmap group_warp_heads(const Heatmap& head_map, const CameraIntrinsics& intr,
                         const CameraPose& pose, const BevGrid& grid,
                         const PlaneStack& planes, const AttentionWeights& attn);

} // namespace bevkit
