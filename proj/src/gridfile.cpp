#include "bevkit/gridfile.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Reader {
    std::span<const std::uint8_t> b;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > b.size())
            throw IoError("grid file truncated");
    }
    std::uint16_t u16() {
        need(2);
        const std::uint16_t v = static_cast<std::uint16_t>(b[pos]) |
                                static_cast<std::uint16_t>(b[pos + 1]) << 8;
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(b[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(b[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::uint8_t u8() {
        need(1);
        return b[pos++];
    }
};

} // namespace

std::vector<std::uint8_t> grid_to_bytes(const Heatmap& map) {
    map.validate();
    if (map.frame != Frame::ImageView && map.frame != Frame::Bev)
        throw IoError("grid files hold image-view or BEV maps only");

    std::vector<std::uint8_t> out;
    out.reserve(23 + map.size() * 4);
    for (char c : {'B', 'E', 'V', 'G'})
        out.push_back(static_cast<std::uint8_t>(c));
    put_u16(out, kGridFileVersion);
    out.push_back(static_cast<std::uint8_t>(map.frame));
    put_u32(out, static_cast<std::uint32_t>(map.height));
    put_u32(out, static_cast<std::uint32_t>(map.width));
    const double scale = map.frame == Frame::Bev ? map.grid->scale : 0.0;
    put_u64(out, std::bit_cast<std::uint64_t>(scale));
    for (double v : map.values) {
        const float f = static_cast<float>(v);
        if (!std::isfinite(f))
            throw IoError("grid value not representable as float32");
        put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
    return out;
}

Heatmap grid_from_bytes(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), "BEVG", 4) != 0)
        throw IoError("not a grid file (bad magic)");
    r.pos = 4;
    const std::uint16_t version = r.u16();
    if (version != kGridFileVersion)
        throw IoError("unsupported grid file version");
    const std::uint8_t frame_tag = r.u8();
    if (frame_tag > 1)
        throw IoError("unknown frame tag");
    const std::uint32_t h = r.u32();
    const std::uint32_t w = r.u32();
    const double scale = std::bit_cast<double>(r.u64());
    if (h == 0 || w == 0 || h > (1u << 20) || w > (1u << 20))
        throw IoError("grid dimensions out of range");

    Heatmap map;
    map.frame = static_cast<Frame>(frame_tag);
    map.height = static_cast<int>(h);
    map.width = static_cast<int>(w);
    if (map.frame == Frame::Bev) {
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw IoError("BEV grid file requires a positive scale");
        BevGrid g;
        g.height = map.height;
        g.width = map.width;
        g.scale = scale;
        g.x_center = 0.0;
        g.y_center = 0.0;
        g.x_bottom_center = -scale * map.height / 2.0;
        map.grid = g;
    } else if (scale != 0.0) {
        throw IoError("image-view grid file must carry zero scale");
    }

    const std::size_t n = static_cast<std::size_t>(h) * w;
    r.need(n * 4);
    if (bytes.size() != r.pos + n * 4)
        throw IoError("grid file has trailing bytes");
    map.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const float f = std::bit_cast<float>(r.u32());
        if (!std::isfinite(f) || f < 0.0f)
            throw IoError("grid values must be finite and nonnegative");
        map.values[i] = static_cast<double>(f);
    }
    map.validate();
    return map;
}

void write_grid(const std::filesystem::path& path, const Heatmap& map) {
    const std::vector<std::uint8_t> bytes = grid_to_bytes(map);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw IoError("write failed: " + path.string());
}

Heatmap read_grid(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f)
        throw IoError("cannot open: " + path.string());
    const std::streamsize size = f.tellg();
    f.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f)
        throw IoError("read failed: " + path.string());
    return grid_from_bytes(bytes);
}

} // namespace bevkit
