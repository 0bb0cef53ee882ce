#pragma once

#include "bevkit/geometry.hpp"
#include "bevkit/heatmap.hpp"

namespace bevkit {

struct LossWeights {
    double alpha = 1.25e-6;      // count regression weight
    double amplification = 100.0; // target amplification factor m
    double lambda_bev = 8.0;
    double lambda_head = 1.0;
    double lambda_feet = 1.0;
    double lambda_height = 0.02; // camera height term, per meter^2
    double lambda_angle = 2.0;   // pitch term, per radian^2

    // Throws DegenerateGeometry on non-positive amplification or
    // negative weights.
    void validate() const;
};

// Heatmap regression loss: pixel MSE against the amplified target plus
// alpha times the squared count error of the de-amplified prediction,
// L = MSE(pred, m * gt) + alpha * (g(pred / m) - g(gt))^2.
double heatmap_loss(const Heatmap& predicted, const Heatmap& truth,
                    const LossWeights& w = {});

// Camera pose regression loss,
// L = lambda_height * (h - h*)^2 + lambda_angle * (theta - theta*)^2.
double pose_loss(const CameraPose& predicted, const CameraPose& truth,
                 const LossWeights& w = {});

// Per-branch heatmap losses plus the pose term, before weighting.
struct BranchLosses {
    double bev = 0.0;
    double head = 0.0;
    double feet = 0.0;
    double pose = 0.0;
};

// Weighted total: lambda_bev * bev + lambda_head * head +
// lambda_feet * feet + pose. The pose term carries its weights already.
double total_loss(const BranchLosses& branches, const LossWeights& w = {});

} // namespace bevkit
