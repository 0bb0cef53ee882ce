#include "bevkit/objective.hpp"

#include <cmath>

#include "bevkit/errors.hpp"

namespace bevkit {

void LossWeights::validate() const {
    const double all[] = {alpha, amplification, lambda_bev, lambda_head,
                          lambda_feet, lambda_height, lambda_angle};
    for (double v : all)
        if (!(v > 0.0) || !std::isfinite(v))
            throw DegenerateGeometry("loss weights must be positive");
}

double heatmap_loss(const Heatmap& predicted, const Heatmap& truth,
                    const LossWeights& w) {
    w.validate();
    if (predicted.height != truth.height || predicted.width != truth.width)
        throw DimensionMismatch("loss operands differ in dimensions");

    const double m = w.amplification;
    double mse = 0.0;
    double count_pred = 0.0;
    double count_truth = 0.0;
    for (std::size_t i = 0; i < predicted.values.size(); ++i) {
        const double p = predicted.values[i];
        const double g = truth.values[i];
        const double d = p - m * g;
        mse += d * d;
        count_pred += p / m;
        count_truth += g;
    }
    mse /= static_cast<double>(predicted.values.size());
    const double dc = count_pred - count_truth;
    return mse + w.alpha * dc * dc;
}

double pose_loss(const CameraPose& predicted, const CameraPose& truth,
                 const LossWeights& w) {
    w.validate();
    const double dh = predicted.height_m - truth.height_m;
    const double dt = predicted.pitch_rad - truth.pitch_rad;
    return w.lambda_height * dh * dh + w.lambda_angle * dt * dt;
}

double total_loss(const BranchLosses& branches, const LossWeights& w) {
    w.validate();
    if (branches.bev < 0.0 || branches.head < 0.0 || branches.feet < 0.0 ||
        branches.pose < 0.0)
        throw DegenerateGeometry("branch losses must be nonnegative");
    return w.lambda_bev * branches.bev + w.lambda_head * branches.head +
           w.lambda_feet * branches.feet + branches.pose;
}

} // namespace bevkit
