#include "bevkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bevkit/errors.hpp"

namespace bevkit {

KeypointSet extract_locations(const Heatmap& bev, const NmsConfig& cfg) {
    bev.validate();
    if (bev.frame != Frame::Bev)
        throw FrameMismatch("location extraction requires a BEV heatmap");
    if (cfg.window < 1 || cfg.window % 2 == 0)
        throw DimensionMismatch("suppression window must be odd and positive");

    const int half = cfg.window / 2;
    const Homography to_world = world_from_bev(*bev.grid);

    KeypointSet out;
    out.frame = Frame::WorldGround;
    for (int r = 0; r < bev.height; ++r) {
        for (int c = 0; c < bev.width; ++c) {
            const double v = bev.at(r, c);
            if (v < cfg.threshold)
                continue;
            bool is_peak = true;
            for (int dr = -half; dr <= half && is_peak; ++dr) {
                for (int dc = -half; dc <= half; ++dc) {
                    if (dr == 0 && dc == 0)
                        continue;
                    const int nr = r + dr, nc = c + dc;
                    if (nr < 0 || nr >= bev.height || nc < 0 || nc >= bev.width)
                        continue;
                    const double nv = bev.at(nr, nc);
                    // Ties break toward the earlier pixel in row-major
                    // order, so a flat plateau yields a single peak.
                    const bool earlier = dr < 0 || (dr == 0 && dc < 0);
                    if (nv > v || (earlier && nv == v)) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak)
                out.points.push_back(to_world.apply({static_cast<double>(c),
                                                     static_cast<double>(r)}));
        }
    }
    return out;
}

LocalizationResult chamfer(const KeypointSet& predicted, const KeypointSet& truth,
                           double d0_m) {
    if (predicted.frame != Frame::WorldGround || truth.frame != Frame::WorldGround)
        throw FrameMismatch("chamfer distance requires world-frame point sets");
    if (!(d0_m > 0.0))
        throw DegenerateGeometry("distance threshold must be positive");

    const bool pe = predicted.points.empty();
    const bool te = truth.points.empty();
    if (pe != te)
        throw UndefinedMetric("chamfer distance undefined for one empty set", pe, te);

    LocalizationResult res;
    if (pe && te)
        return res;

    auto mean_nn = [](const std::vector<Point2>& from, const std::vector<Point2>& to) {
        double acc = 0.0;
        for (const Point2& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& q : to)
                best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
            acc += best;
        }
        return acc / static_cast<double>(from.size());
    };

    res.chamfer_m = mean_nn(predicted.points, truth.points) +
                    mean_nn(truth.points, predicted.points);
    res.chamfer_normalized = res.chamfer_m / (2.0 * d0_m);
    return res;
}

double risk_iou(const BinaryMask& predicted, const BinaryMask& truth) {
    if (predicted.height != truth.height || predicted.width != truth.width)
        throw DimensionMismatch("mask dimensions do not match");
    std::int64_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < predicted.values.size(); ++i) {
        const bool a = predicted.values[i] != 0;
        const bool b = truth.values[i] != 0;
        inter += a && b;
        uni += a || b;
    }
    if (uni == 0)
        return 1.0; // both empty: perfect agreement
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double global_risk_mse(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size())
        throw DimensionMismatch("paired risk sequences differ in length");
    if (predicted.empty())
        throw UndefinedMetric("mean squared error undefined for empty sequences",
                              true, true);
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - truth[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predicted.size());
}

} // namespace bevkit
