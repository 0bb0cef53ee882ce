#pragma once

#include <cstdint>

namespace bevkit {

// 2D point. Interpreted per frame: (u, v) pixel coordinates in raster
// frames (u = column, v = row), (x, y) meters in the world ground frame.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, const Point2& p) { return {s * p.x, s * p.y}; }

// Coordinate frame tag carried by keypoint sets and heatmaps.
enum class Frame : std::uint8_t {
    ImageView = 0,   // camera pixel raster
    Bev = 1,         // bird's eye view raster, meters via BevGrid scale
    WorldGround = 2, // ground-plane metric coordinates, meters
};

const char* frame_name(Frame f);

} // namespace bevkit
