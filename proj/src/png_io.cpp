#include "bevkit/png_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <zlib.h>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 3; i >= 0; --i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& data) {
    put_u32_be(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + data.size()));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

} // namespace

void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     std::span<const std::uint8_t> pixels) {
    if (width <= 0 || height <= 0)
        throw IoError("png dimensions must be positive");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw IoError("png pixel buffer size does not match dimensions");

    // Scanlines, each prefixed with filter type 0 (none).
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(height) * (width + 1));
    for (int r = 0; r < height; ++r) {
        raw.push_back(0);
        raw.insert(raw.end(), pixels.begin() + static_cast<std::size_t>(r) * width,
                   pixels.begin() + static_cast<std::size_t>(r + 1) * width);
    }
    uLongf dst_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> deflated(dst_len);
    if (compress2(deflated.data(), &dst_len, raw.data(),
                  static_cast<uLong>(raw.size()), Z_DEFAULT_COMPRESSION) != Z_OK)
        throw IoError("png deflate failed");
    deflated.resize(dst_len);

    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(0); // grayscale
    ihdr.push_back(0); // deflate
    ihdr.push_back(0); // adaptive filtering
    ihdr.push_back(0); // no interlace

    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", deflated);
    put_chunk(png, "IEND", {});

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(png.data()),
            static_cast<std::streamsize>(png.size()));
    if (!f)
        throw IoError("write failed: " + path.string());
}

std::vector<std::uint8_t> mask_to_gray8(const BinaryMask& mask) {
    std::vector<std::uint8_t> out(mask.values.size());
    for (std::size_t i = 0; i < mask.values.size(); ++i)
        out[i] = mask.values[i] ? 255 : 0;
    return out;
}

std::vector<std::uint8_t> heatmap_to_gray8(const Heatmap& map) {
    const double mx = map.values.empty()
                          ? 0.0
                          : *std::max_element(map.values.begin(), map.values.end());
    std::vector<std::uint8_t> out(map.values.size(), 0);
    if (mx <= 0.0)
        return out;
    for (std::size_t i = 0; i < map.values.size(); ++i)
        out[i] = static_cast<std::uint8_t>(
            std::clamp(map.values[i] / mx * 255.0 + 0.5, 0.0, 255.0));
    return out;
}

} // namespace bevkit
