#pragma once

#include <Eigen/Dense>

#include "bevkit/types.hpp"

namespace bevkit {

// Pinhole intrinsics. Pixel coordinates follow the raster convention:
// u grows rightward (columns), v grows downward (rows), and integer
// coordinates address pixel centers.
struct CameraIntrinsics {
    double fu = 0.0; // horizontal focal length, px
    double fv = 0.0; // vertical focal length, px
    double uc = 0.0; // principal point column, px
    double vc = 0.0; // principal point row, px
    int image_w = 0;
    int image_h = 0;

    Eigen::Matrix3d k_matrix() const;

    // Throws DegenerateGeometry on non-positive focal lengths or dimensions.
    void validate() const;
};

// Camera extrinsics under the zero-yaw, zero-roll convention: the camera
// sits at world (0, 0, height_m) looking along +x, pitched downward by
// pitch_rad from the horizontal. World x points away from the camera along
// the view direction's ground projection, y to the left, z up.
struct CameraPose {
    double height_m = 0.0;
    double pitch_rad = 0.0; // (0, pi/2]; pi/2 is straight down

    // Throws DegenerateGeometry when height <= 0 or pitch outside (0, pi/2].
    void validate() const;
};

// 3x3 projective mapping between planes, applied to homogeneous points
// with perspective division. Equality is meaningful only up to scale.
class Homography {
public:
    Homography() : m_(Eigen::Matrix3d::Identity()) {}
    explicit Homography(const Eigen::Matrix3d& m) : m_(m) {}

    const Eigen::Matrix3d& matrix() const { return m_; }

    // Maps a point through the homography. The result is non-finite for
    // points on the line sent to infinity; samplers treat those as outside.
    Point2 apply(const Point2& p) const;

    // Throws DegenerateGeometry when the matrix is singular.
    Homography inverse() const;

    double determinant() const { return m_.determinant(); }

    friend Homography operator*(const Homography& a, const Homography& b) {
        return Homography(a.m_ * b.m_);
    }

private:
    Eigen::Matrix3d m_;
};

// BEV raster geometry. The grid is axis-aligned with the world ground
// frame: rows sweep world x (far to near), columns sweep world y (left to
// right), both at `scale` meters per pixel. Anchors are chosen so the
// image center ray lands at the grid center and the bottom-center image
// pixel ray lands at the grid's bottom-center.
struct BevGrid {
    int height = 0;
    int width = 0;
    double scale = 0.0;           // meters per BEV pixel
    double x_center = 0.0;        // world x of the image-center ground point
    double y_center = 0.0;        // world y of the same point (0 at zero yaw)
    double x_bottom_center = 0.0; // world x of the bottom-center pixel's ground point

    // Throws DegenerateGeometry on non-positive dimensions or scale.
    void validate() const;
};

// Homography from the horizontal plane z = plane_height_m (world (x, y)
// on that plane) to image pixels. Throws DegeneratePlane when the plane
// is not strictly below the camera center.
Homography image_from_world(const CameraIntrinsics& intr, const CameraPose& pose,
                            double plane_height_m = 0.0);

// Builds a BEV grid of the given raster size for this camera. The scale
// is derived from the ground points hit by the image-center and
// bottom-center rays, so the anchoring invariants hold for any grid size.
BevGrid make_bev_grid(const CameraIntrinsics& intr, const CameraPose& pose,
                      int height, int width);

// Closed form h / (sin(theta) * (vc cos(theta) + fv sin(theta))) for the
// BEV scale. Agrees with make_bev_grid exactly when the principal point
// is vertically centered and the grid height equals the image height;
// kept separate because it silently drifts outside that regime.
double bev_scale_closed_form(const CameraIntrinsics& intr, const CameraPose& pose);

// Affine map from BEV pixel coordinates (u, v) to world meters (x, y).
// Row v increases toward the camera (decreasing x), column u increases
// with world -y, hence the axis swap and negation.
Homography world_from_bev(const BevGrid& grid);

// Composition image_from_world(plane) * world_from_bev: maps BEV pixels
// straight into the image for a chosen horizontal plane.
Homography image_from_bev(const CameraIntrinsics& intr, const CameraPose& pose,
                          const BevGrid& grid, double plane_height_m = 0.0);

// Rescales intrinsics for a resized image; focal lengths and principal
// point scale by the per-axis ratios.
CameraIntrinsics rescale_intrinsics(const CameraIntrinsics& intr, int new_w, int new_h);

} // namespace bevkit
