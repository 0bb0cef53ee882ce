#pragma once

#include <optional>
#include <vector>

#include "bevkit/geometry.hpp"
#include "bevkit/types.hpp"

namespace bevkit {

// Dense nonnegative scalar field over a raster. Values are stored row
// major in double; serialization narrows to float32. BEV-framed maps
// carry their grid so metric quantities stay attached to the raster.
struct Heatmap {
    Frame frame = Frame::ImageView;
    int height = 0;
    int width = 0;
    std::vector<double> values; // row major, height * width
    std::optional<BevGrid> grid; // present iff frame == Frame::Bev

    static Heatmap zeros(Frame frame, int height, int width,
                         std::optional<BevGrid> grid = std::nullopt);

    double& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    std::size_t size() const { return values.size(); }

    // Throws DimensionMismatch / FrameMismatch / DegenerateGeometry when
    // the buffer, frame tag and grid are inconsistent.
    void validate() const;
};

// Samples the map at fractional pixel coordinates (u = column, v = row)
// with bilinear interpolation and zero padding outside the raster.
// Non-finite coordinates sample as zero.
double bilinear_sample(const Heatmap& map, double u, double v);

// Labeled point list in a single frame. `in_roi` is a parallel flag
// vector; empty means every point is inside the region of interest.
struct KeypointSet {
    Frame frame = Frame::ImageView;
    std::vector<Point2> points;
    std::vector<std::uint8_t> in_roi;

    std::size_t size() const { return points.size(); }
    bool point_in_roi(std::size_t i) const { return in_roi.empty() || in_roi[i] != 0; }

    // Subset with only the in-RoI points, flags dropped.
    KeypointSet roi_subset() const;
};

enum class RasterMode {
    Gaussian, // isotropic Gaussian per point, truncated at 4 sigma
    Impulse,  // bilinear split of a unit mass over the 4 nearest pixels
};

struct RasterConfig {
    double sigma_px = 5.0;
    RasterMode mode = RasterMode::Gaussian;
    // Renormalize each point's in-bounds support to unit mass, so border
    // truncation does not lose count.
    bool normalize_mass = true;
};

// Renders one unit of mass per keypoint onto an height x width raster.
// Points may fall outside the raster; whatever part of their support
// lands in bounds is kept (all of it when normalize_mass re-anchors the
// mass of partially covered points). `grid` tags the output when the
// target frame is BEV.
Heatmap rasterize(const KeypointSet& points, int height, int width,
                  const RasterConfig& cfg = {},
                  const std::optional<BevGrid>& grid = std::nullopt);

// Projects image-frame feet pixels through the ground homography into
// BEV pixel coordinates. Points landing outside [0, W) x [0, H) are kept
// and flagged out of RoI.
KeypointSet bev_points_from_feet(const KeypointSet& feet, const CameraIntrinsics& intr,
                                 const CameraPose& pose, const BevGrid& grid);

// Total mass of the map (crowd count under the unit-mass convention).
// Pairwise summation in a fixed order; deterministic.
double count(const Heatmap& map);

} // namespace bevkit
