#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bevkit/heatmap.hpp"

namespace bevkit {

// Binary heatmap container. Layout, all little-endian:
//   magic "BEVG" | version u16 | frame u8 | H u32 | W u32 | scale f64 |
//   payload H*W f32, row major.
// Frame tag: 0 = image view, 1 = BEV. Scale is meters per pixel for BEV
// files and 0 otherwise. The world anchor is not stored: a loaded BEV
// grid is centered at world (0, 0), which leaves every translation-
// invariant metric (Chamfer, IoU, global risk) unchanged.
inline constexpr std::uint16_t kGridFileVersion = 1;

std::vector<std::uint8_t> grid_to_bytes(const Heatmap& map);
Heatmap grid_from_bytes(std::span<const std::uint8_t> bytes);

// Throw IoError on filesystem failures or malformed content (bad magic,
// truncated payload, non-finite or negative values).
void write_grid(const std::filesystem::path& path, const Heatmap& map);
Heatmap read_grid(const std::filesystem::path& path);

} // namespace bevkit
