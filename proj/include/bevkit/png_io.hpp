#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bevkit/heatmap.hpp"
#include "bevkit/risk.hpp"

namespace bevkit {

// Minimal 8-bit grayscale PNG writer for visualization exports. Files
// are never read back; the reference pixel data lives in grid files.
void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     std::span<const std::uint8_t> pixels);

// 0 -> 0, nonzero -> 255.
std::vector<std::uint8_t> mask_to_gray8(const BinaryMask& mask);

// Linear scaling of [0, max] to [0, 255]; an all-zero map stays black.
std::vector<std::uint8_t> heatmap_to_gray8(const Heatmap& map);

} // namespace bevkit
