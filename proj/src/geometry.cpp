#include "bevkit/geometry.hpp"

#include <cmath>
#include <string>

#include "bevkit/errors.hpp"

namespace bevkit {

const char* frame_name(Frame f) {
    switch (f) {
    case Frame::ImageView: return "image_view";
    case Frame::Bev: return "bev";
    case Frame::WorldGround: return "world_ground";
    }
    return "unknown";
}

Eigen::Matrix3d CameraIntrinsics::k_matrix() const {
    Eigen::Matrix3d k;
    k << fu, 0.0, uc,
         0.0, fv, vc,
         0.0, 0.0, 1.0;
    return k;
}

void CameraIntrinsics::validate() const {
    if (!(fu > 0.0) || !(fv > 0.0))
        throw DegenerateGeometry("focal lengths must be positive");
    if (image_w <= 0 || image_h <= 0)
        throw DegenerateGeometry("image dimensions must be positive");
    if (!(uc >= 0.0) || !(uc < image_w) || !(vc >= 0.0) || !(vc < image_h))
        throw DegenerateGeometry("principal point must lie inside the image");
}

void CameraPose::validate() const {
    if (!(height_m > 0.0) || !std::isfinite(height_m))
        throw DegenerateGeometry("camera height must be positive");
    constexpr double half_pi = 1.5707963267948966;
    if (!(pitch_rad > 0.0) || !(pitch_rad <= half_pi))
        throw DegenerateGeometry("pitch must lie in (0, pi/2]");
}

Point2 Homography::apply(const Point2& p) const {
    const Eigen::Vector3d q = m_ * Eigen::Vector3d(p.x, p.y, 1.0);
    return {q.x() / q.z(), q.y() / q.z()};
}

Homography Homography::inverse() const {
    const double det = m_.determinant();
    const double scale = m_.norm();
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale * scale * scale)
        throw DegenerateGeometry("homography is singular");
    return Homography(Eigen::Matrix3d(m_.inverse()));
}

void BevGrid::validate() const {
    if (height <= 0 || width <= 0)
        throw DegenerateGeometry("grid dimensions must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DegenerateGeometry("grid scale must be positive");
    if (!std::isfinite(x_center) || !std::isfinite(y_center) || !std::isfinite(x_bottom_center))
        throw DegenerateGeometry("grid anchors must be finite");
}

Homography image_from_world(const CameraIntrinsics& intr, const CameraPose& pose,
                            double plane_height_m) {
    intr.validate();
    pose.validate();
    const double hp = pose.height_m - plane_height_m; // camera height above the plane
    if (!(hp > 0.0))
        throw DegeneratePlane("plane must lie strictly below the camera center");

    const double a = std::cos(pose.pitch_rad);
    const double b = std::sin(pose.pitch_rad);

    // Closed form of K [I|0] (camera-from-world) restricted to the plane;
    // det = -fu * fv * hp, so the map is invertible whenever hp > 0.
    Eigen::Matrix3d h;
    h << intr.uc * a,                -intr.fu, intr.uc * hp * b,
         intr.vc * a - intr.fv * b,  0.0,      hp * (intr.fv * a + intr.vc * b),
         a,                          0.0,      hp * b;
    return Homography(h);
}

BevGrid make_bev_grid(const CameraIntrinsics& intr, const CameraPose& pose,
                      int height, int width) {
    if (height <= 0 || width <= 0)
        throw DegenerateGeometry("grid dimensions must be positive");
    intr.validate();
    pose.validate();

    const double a = std::cos(pose.pitch_rad);
    const double b = std::sin(pose.pitch_rad);
    const double h = pose.height_m;

    // Ground intersection of the image-center ray. The optical axis hits
    // the ground at distance h * cot(theta); zero yaw keeps it on y = 0.
    if (!(b > 0.0))
        throw DegenerateGeometry("view direction is parallel to the ground");
    const double xc = h * a / b;
    const double yc = 0.0;

    // Ground intersection of the ray through the bottom-center pixel
    // (uc, image_h). That ray is pitched (theta + atan(d / fv)) below the
    // horizontal, with d the pixel's offset from the principal row.
    const double d = static_cast<double>(intr.image_h) - intr.vc;
    const double denom = d * a + intr.fv * b;
    if (!(denom > 0.0))
        throw DegenerateGeometry("bottom-center ray does not hit the ground");
    const double xbc = h * (intr.fv * a - d * b) / denom;

    // Anchoring fixes the scale: the center-to-bottom ground span covers
    // half the grid height.
    const double scale = 2.0 * (xc - xbc) / static_cast<double>(height);
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DegenerateGeometry("derived grid scale is not positive");

    BevGrid grid;
    grid.height = height;
    grid.width = width;
    grid.scale = scale;
    grid.x_center = xc;
    grid.y_center = yc;
    grid.x_bottom_center = xbc;
    return grid;
}

double bev_scale_closed_form(const CameraIntrinsics& intr, const CameraPose& pose) {
    intr.validate();
    pose.validate();
    const double a = std::cos(pose.pitch_rad);
    const double b = std::sin(pose.pitch_rad);
    const double denom = b * (intr.vc * a + intr.fv * b);
    if (!(denom > 0.0))
        throw DegenerateGeometry("closed-form scale undefined for this pose");
    return pose.height_m / denom;
}

Homography world_from_bev(const BevGrid& grid) {
    grid.validate();
    const double s = grid.scale;

    // Row 0 sits farthest from the camera; the grid center (W/2, H/2)
    // maps to (x_center, y_center).
    Eigen::Matrix3d t;
    t << 0.0, -s,  grid.x_center + s * grid.height / 2.0,
         -s,  0.0, grid.y_center + s * grid.width / 2.0,
         0.0, 0.0, 1.0;
    return Homography(t);
}

Homography image_from_bev(const CameraIntrinsics& intr, const CameraPose& pose,
                          const BevGrid& grid, double plane_height_m) {
    return image_from_world(intr, pose, plane_height_m) * world_from_bev(grid);
}

CameraIntrinsics rescale_intrinsics(const CameraIntrinsics& intr, int new_w, int new_h) {
    intr.validate();
    if (new_w <= 0 || new_h <= 0)
        throw DegenerateGeometry("rescaled dimensions must be positive");
    const double rx = static_cast<double>(new_w) / static_cast<double>(intr.image_w);
    const double ry = static_cast<double>(new_h) / static_cast<double>(intr.image_h);
    CameraIntrinsics out = intr;
    out.fu = intr.fu * rx;
    out.fv = intr.fv * ry;
    out.uc = intr.uc * rx;
    out.vc = intr.vc * ry;
    out.image_w = new_w;
    out.image_h = new_h;
    return out;
}

} // namespace bevkit
