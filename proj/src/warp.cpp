#include "bevkit/warp.hpp"

#include <algorithm>
#include <cmath>

#include "bevkit/errors.hpp"

namespace bevkit {

PlaneStack PlaneStack::default_head_planes() {
    PlaneStack s;
    s.plane_heights_m.resize(8);
    for (int i = 0; i < 8; ++i)
        s.plane_heights_m[i] = 1.1 + 0.1 * i;
    return s;
}

void PlaneStack::validate(double camera_height_m) const {
    if (plane_heights_m.empty())
        throw DegenerateGeometry("plane stack is empty");
    for (std::size_t i = 0; i < plane_heights_m.size(); ++i) {
        if (!std::isfinite(plane_heights_m[i]))
            throw DegenerateGeometry("plane height must be finite");
        if (i > 0 && !(plane_heights_m[i] > plane_heights_m[i - 1]))
            throw DegenerateGeometry("plane heights must be strictly increasing");
        if (!(plane_heights_m[i] < camera_height_m))
            throw DegeneratePlane("plane must lie strictly below the camera center");
    }
}

AttentionWeights AttentionWeights::uniform(int n_planes, int height, int width) {
    AttentionWeights w;
    w.n_planes = n_planes;
    w.height = height;
    w.width = width;
    w.data.assign(static_cast<std::size_t>(n_planes) * height * width,
                  1.0 / n_planes);
    w.normalized = true;
    w.validate();
    return w;
}

AttentionWeights AttentionWeights::one_hot(int plane, int n_planes, int height, int width) {
    AttentionWeights w;
    w.n_planes = n_planes;
    w.height = height;
    w.width = width;
    w.data.assign(static_cast<std::size_t>(n_planes) * height * width, 0.0);
    w.normalized = true;
    w.validate();
    if (plane < 0 || plane >= n_planes)
        throw DimensionMismatch("one-hot plane index out of range");
    std::fill_n(w.data.begin() + static_cast<std::size_t>(plane) * height * width,
                static_cast<std::size_t>(height) * width, 1.0);
    return w;
}

AttentionWeights AttentionWeights::from_logits(int n_planes, int height, int width,
                                               std::vector<double> logits) {
    AttentionWeights w;
    w.n_planes = n_planes;
    w.height = height;
    w.width = width;
    w.data = std::move(logits);
    w.normalized = false;
    w.validate();
    return w;
}

void AttentionWeights::validate() const {
    if (n_planes <= 0 || height <= 0 || width <= 0)
        throw DimensionMismatch("attention dimensions must be positive");
    if (data.size() != static_cast<std::size_t>(n_planes) * height * width)
        throw DimensionMismatch("attention buffer size does not match dimensions");
}

AttentionWeights softmax_normalize(const AttentionWeights& logits) {
    logits.validate();
    AttentionWeights out = logits;
    const std::size_t plane_stride = static_cast<std::size_t>(out.height) * out.width;
    for (std::size_t px = 0; px < plane_stride; ++px) {
        double mx = out.data[px];
        for (int p = 1; p < out.n_planes; ++p)
            mx = std::max(mx, out.data[p * plane_stride + px]);
        double sum = 0.0;
        for (int p = 0; p < out.n_planes; ++p) {
            double& v = out.data[p * plane_stride + px];
            v = std::exp(v - mx);
            sum += v;
        }
        for (int p = 0; p < out.n_planes; ++p)
            out.data[p * plane_stride + px] /= sum;
    }
    out.normalized = true;
    return out;
}

Heatmap warp_with_homography(const Heatmap& src, const Homography& src_from_dst,
                             Frame dst_frame, int dst_height, int dst_width,
                             const std::optional<BevGrid>& dst_grid) {
    src.validate();
    Heatmap out = Heatmap::zeros(dst_frame, dst_height, dst_width, dst_grid);
    for (int r = 0; r < dst_height; ++r) {
        for (int c = 0; c < dst_width; ++c) {
            const Point2 p = src_from_dst.apply({static_cast<double>(c),
                                                 static_cast<double>(r)});
            out.at(r, c) = bilinear_sample(src, p.x, p.y);
        }
    }
    return out;
}

Heatmap warp_to_bev(const Heatmap& image_map, const CameraIntrinsics& intr,
                    const CameraPose& pose, const BevGrid& grid,
                    double plane_height_m) {
    if (image_map.frame != Frame::ImageView)
        throw FrameMismatch("warp_to_bev expects an image-frame map");
    if (image_map.height != intr.image_h || image_map.width != intr.image_w)
        throw DimensionMismatch("image map does not match the camera dimensions");
    const Homography img_from_bev = image_from_bev(intr, pose, grid, plane_height_m);
    return warp_with_homography(image_map, img_from_bev, Frame::Bev,
                                grid.height, grid.width, grid);
}

Heatmap group_warp_heads(const Heatmap& head_map, const CameraIntrinsics& intr,
                         const CameraPose& pose, const BevGrid& grid,
                         const PlaneStack& planes, const AttentionWeights& attn) {
    planes.validate(pose.height_m);
    attn.validate();
    if (!attn.normalized)
        throw Error("group transform requires normalized attention weights");
    if (attn.n_planes != static_cast<int>(planes.size()))
        throw DimensionMismatch("attention planes do not match the plane stack");
    if (attn.height != grid.height || attn.width != grid.width)
        throw DimensionMismatch("attention dimensions do not match the grid");

    Heatmap out = Heatmap::zeros(Frame::Bev, grid.height, grid.width, grid);
    const std::size_t plane_stride = static_cast<std::size_t>(grid.height) * grid.width;
    for (std::size_t p = 0; p < planes.size(); ++p) {
        const Heatmap warped =
            warp_to_bev(head_map, intr, pose, grid, planes.plane_heights_m[p]);
        const double* w = attn.data.data() + p * plane_stride;
        for (std::size_t i = 0; i < plane_stride; ++i)
            out.values[i] += w[i] * warped.values[i];
    }
    return out;
}

} // namespace bevkit
