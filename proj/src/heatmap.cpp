#include "bevkit/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "bevkit/errors.hpp"
#include "bevkit/numeric.hpp"

namespace bevkit {

Heatmap Heatmap::zeros(Frame frame, int height, int width, std::optional<BevGrid> grid) {
    Heatmap m;
    m.frame = frame;
    m.height = height;
    m.width = width;
    m.values.assign(static_cast<std::size_t>(height) * width, 0.0);
    m.grid = std::move(grid);
    m.validate();
    return m;
}

void Heatmap::validate() const {
    if (height <= 0 || width <= 0)
        throw DimensionMismatch("heatmap dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(height) * width)
        throw DimensionMismatch("heatmap buffer size does not match dimensions");
    if (frame == Frame::Bev) {
        if (!grid)
            throw FrameMismatch("BEV heatmap requires a grid");
        grid->validate();
        if (grid->height != height || grid->width != width)
            throw DimensionMismatch("heatmap dimensions do not match its grid");
    } else if (grid) {
        throw FrameMismatch("only BEV heatmaps carry a grid");
    }
}

double bilinear_sample(const Heatmap& map, double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v))
        return 0.0;
    const int c0 = static_cast<int>(std::floor(u));
    const int r0 = static_cast<int>(std::floor(v));
    const double fu = u - c0;
    const double fv = v - r0;

    double acc = 0.0;
    for (int dr = 0; dr <= 1; ++dr) {
        for (int dc = 0; dc <= 1; ++dc) {
            const int r = r0 + dr;
            const int c = c0 + dc;
            if (r < 0 || r >= map.height || c < 0 || c >= map.width)
                continue; // zero padding
            const double w = (dr ? fv : 1.0 - fv) * (dc ? fu : 1.0 - fu);
            acc += w * map.at(r, c);
        }
    }
    return acc;
}

KeypointSet KeypointSet::roi_subset() const {
    KeypointSet out;
    out.frame = frame;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (point_in_roi(i))
            out.points.push_back(points[i]);
    return out;
}

namespace {

// One point's splat: pixel indices and weights restricted to the raster.
struct Splat {
    std::vector<std::size_t> idx;
    std::vector<double> w;
};

Splat gaussian_splat(const Point2& p, int height, int width, double sigma) {
    Splat s;
    const double radius = 4.0 * sigma;
    const double r2 = radius * radius;
    const int rmin = std::max(0, static_cast<int>(std::ceil(p.y - radius)));
    const int rmax = std::min(height - 1, static_cast<int>(std::floor(p.y + radius)));
    const int cmin = std::max(0, static_cast<int>(std::ceil(p.x - radius)));
    const int cmax = std::min(width - 1, static_cast<int>(std::floor(p.x + radius)));
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    const double amp = 1.0 / (2.0 * 3.14159265358979323846 * sigma * sigma);
    for (int r = rmin; r <= rmax; ++r) {
        const double dv = r - p.y;
        for (int c = cmin; c <= cmax; ++c) {
            const double du = c - p.x;
            const double d2 = du * du + dv * dv;
            if (d2 > r2)
                continue;
            s.idx.push_back(static_cast<std::size_t>(r) * width + c);
            s.w.push_back(amp * std::exp(-d2 * inv2s2));
        }
    }
    return s;
}

Splat impulse_splat(const Point2& p, int height, int width) {
    Splat s;
    const int c0 = static_cast<int>(std::floor(p.x));
    const int r0 = static_cast<int>(std::floor(p.y));
    const double fu = p.x - c0;
    const double fv = p.y - r0;
    for (int dr = 0; dr <= 1; ++dr) {
        for (int dc = 0; dc <= 1; ++dc) {
            const int r = r0 + dr;
            const int c = c0 + dc;
            if (r < 0 || r >= height || c < 0 || c >= width)
                continue;
            const double w = (dr ? fv : 1.0 - fv) * (dc ? fu : 1.0 - fu);
            if (w == 0.0)
                continue;
            s.idx.push_back(static_cast<std::size_t>(r) * width + c);
            s.w.push_back(w);
        }
    }
    return s;
}

} // namespace

Heatmap rasterize(const KeypointSet& points, int height, int width,
                  const RasterConfig& cfg, const std::optional<BevGrid>& grid) {
    if (cfg.mode == RasterMode::Gaussian && !(cfg.sigma_px > 0.0))
        throw DegenerateGeometry("gaussian raster requires positive sigma");
    const Frame frame = grid ? Frame::Bev : Frame::ImageView;
    if (points.frame != frame)
        throw FrameMismatch(std::string("cannot rasterize ") +
                            frame_name(points.frame) + " keypoints onto a " +
                            frame_name(frame) + " raster");

    Heatmap out = Heatmap::zeros(frame, height, width, grid);

    for (const Point2& p : points.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            continue;
        Splat s = cfg.mode == RasterMode::Gaussian
                      ? gaussian_splat(p, height, width, cfg.sigma_px)
                      : impulse_splat(p, height, width);
        if (s.idx.empty())
            continue; // support entirely off raster; mass truncated
        if (cfg.normalize_mass) {
            const double total = pairwise_sum(s.w);
            if (total > 0.0)
                for (double& w : s.w) w /= total;
        }
        for (std::size_t i = 0; i < s.idx.size(); ++i)
            out.values[s.idx[i]] += s.w[i];
    }
    return out;
}

KeypointSet bev_points_from_feet(const KeypointSet& feet, const CameraIntrinsics& intr,
                                 const CameraPose& pose, const BevGrid& grid) {
    if (feet.frame != Frame::ImageView)
        throw FrameMismatch("feet keypoints must be in the image frame");
    grid.validate();

    const Homography bev_from_image =
        image_from_bev(intr, pose, grid, 0.0).inverse();

    KeypointSet out;
    out.frame = Frame::Bev;
    out.points.reserve(feet.size());
    out.in_roi.reserve(feet.size());
    for (const Point2& uv : feet.points) {
        const Point2 q = bev_from_image.apply(uv);
        out.points.push_back(q);
        const bool inside = std::isfinite(q.x) && std::isfinite(q.y) &&
                            q.x >= 0.0 && q.x < grid.width &&
                            q.y >= 0.0 && q.y < grid.height;
        out.in_roi.push_back(inside ? 1 : 0);
    }
    return out;
}

double count(const Heatmap& map) {
    return pairwise_sum(map.values);
}

} // namespace bevkit
