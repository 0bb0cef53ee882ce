#include "bevkit/risk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "bevkit/errors.hpp"
#include "bevkit/numeric.hpp"

namespace bevkit {

void RiskConfig::validate() const {
    if (!(d0_m > 0.0) || !std::isfinite(d0_m))
        throw DegenerateGeometry("distance threshold must be positive");
    if (!(r0 >= 1.0) || !std::isfinite(r0))
        throw DegenerateGeometry("occupancy threshold must be at least 1");
}

std::int64_t BinaryMask::area() const {
    std::int64_t n = 0;
    for (std::uint8_t v : values) n += v != 0;
    return n;
}

namespace {

// Integer offsets whose pixel centers fall within the disk radius.
std::vector<std::pair<int, int>> disk_offsets(double radius_px) {
    const int r = static_cast<int>(std::floor(radius_px));
    const double r2 = radius_px * radius_px;
    std::vector<std::pair<int, int>> off;
    off.reserve(static_cast<std::size_t>((2 * r + 1)) * (2 * r + 1));
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (static_cast<double>(dy) * dy + static_cast<double>(dx) * dx <= r2)
                off.emplace_back(dy, dx);
    return off;
}

void convolve_direct(const Heatmap& src, const std::vector<std::pair<int, int>>& off,
                     Heatmap& dst) {
    const int h = src.height, w = src.width;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = src.at(y, x);
            if (v == 0.0)
                continue;
            for (const auto& [dy, dx] : off) {
                const int ty = y + dy, tx = x + dx;
                if (ty < 0 || ty >= h || tx < 0 || tx >= w)
                    continue;
                dst.at(ty, tx) += v;
            }
        }
    }
}

// FFTW planning is not thread safe; execution of independent plans is.
std::mutex fftw_plan_mutex;

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : p(fftw_malloc(n)) {}
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* p;
};

void convolve_fft(const Heatmap& src, const std::vector<std::pair<int, int>>& off,
                  int radius, Heatmap& dst) {
    const int h = src.height, w = src.width;
    // Zero padding by the kernel radius on each side prevents circular
    // wrap from reaching the valid output window.
    const int ph = h + 2 * radius;
    const int pw = w + 2 * radius;
    const std::size_t real_n = static_cast<std::size_t>(ph) * pw;
    const std::size_t cplx_n = static_cast<std::size_t>(ph) * (pw / 2 + 1);

    FftwBuffer a_real(real_n * sizeof(double));
    FftwBuffer k_real(real_n * sizeof(double));
    FftwBuffer a_cplx(cplx_n * sizeof(fftw_complex));
    FftwBuffer k_cplx(cplx_n * sizeof(fftw_complex));
    double* a = static_cast<double*>(a_real.p);
    double* k = static_cast<double*>(k_real.p);
    auto* af = static_cast<fftw_complex*>(a_cplx.p);
    auto* kf = static_cast<fftw_complex*>(k_cplx.p);

    std::fill_n(a, real_n, 0.0);
    std::fill_n(k, real_n, 0.0);
    for (int y = 0; y < h; ++y)
        std::copy_n(&src.values[static_cast<std::size_t>(y) * w], w,
                    a + static_cast<std::size_t>(y) * pw);
    for (const auto& [dy, dx] : off) {
        const int ky = (dy + ph) % ph;
        const int kx = (dx + pw) % pw;
        k[static_cast<std::size_t>(ky) * pw + kx] = 1.0;
    }

    fftw_plan fwd_a, fwd_k, bwd;
    {
        // FFTW_ESTIMATE picks the plan from the shape alone, never from
        // runtime measurement, which keeps results reproducible.
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fwd_a = fftw_plan_dft_r2c_2d(ph, pw, a, af, FFTW_ESTIMATE);
        fwd_k = fftw_plan_dft_r2c_2d(ph, pw, k, kf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(ph, pw, af, a, FFTW_ESTIMATE);
    }
    fftw_execute(fwd_a);
    fftw_execute(fwd_k);
    const double inv_n = 1.0 / static_cast<double>(real_n);
    for (std::size_t i = 0; i < cplx_n; ++i) {
        const std::complex<double> prod =
            std::complex<double>(af[i][0], af[i][1]) *
            std::complex<double>(kf[i][0], kf[i][1]);
        af[i][0] = prod.real() * inv_n;
        af[i][1] = prod.imag() * inv_n;
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(fwd_a);
        fftw_destroy_plan(fwd_k);
        fftw_destroy_plan(bwd);
    }

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            // Roundoff can leave tiny negatives where the result is zero.
            dst.at(y, x) = std::max(0.0, a[static_cast<std::size_t>(y) * pw + x]);
}

} // namespace

Heatmap risk_map(const Heatmap& bev, const RiskConfig& cfg, ConvPath path) {
    bev.validate();
    cfg.validate();
    if (bev.frame != Frame::Bev)
        throw FrameMismatch("risk map requires a BEV heatmap");

    const double radius_px = cfg.d0_m / bev.grid->scale;
    if (radius_px > std::max(bev.height, bev.width))
        throw KernelTooLarge("disk radius exceeds the raster extent");

    const auto off = disk_offsets(radius_px);
    Heatmap out = Heatmap::zeros(Frame::Bev, bev.height, bev.width, bev.grid);

    if (path == ConvPath::Auto) {
        std::size_t nnz = 0;
        for (double v : bev.values) nnz += v != 0.0;
        // Scatter cost nnz * |disk| against the FFT's fixed cost; the
        // cutoff favors the exact path for sparse inputs.
        const double direct_cost = static_cast<double>(nnz) * off.size();
        path = direct_cost <= 16e6 ? ConvPath::Direct : ConvPath::Fft;
    }
    if (path == ConvPath::Direct)
        convolve_direct(bev, off, out);
    else
        convolve_fft(bev, off, static_cast<int>(std::floor(radius_px)), out);
    return out;
}

// An isolated pair within d0 puts both persons' cells at exactly r0 in
// exact arithmetic (each fully covered unit mass counts once), so the
// threshold sits on a plateau. The tolerance keeps those cells in the
// mask regardless of which convolution path, summation order, or float32
// round trip produced the field; it is far below any genuine count gap.
constexpr double kMaskThresholdTol = 1e-6;

BinaryMask risk_mask(const Heatmap& risk, const RiskConfig& cfg) {
    risk.validate();
    cfg.validate();
    BinaryMask m;
    m.height = risk.height;
    m.width = risk.width;
    m.values.resize(risk.size());
    for (std::size_t i = 0; i < risk.size(); ++i)
        m.values[i] = risk.values[i] >= cfg.r0 - kMaskThresholdTol ? 1 : 0;
    return m;
}

double global_risk(const Heatmap& bev, const Heatmap& risk, const RiskConfig& cfg) {
    bev.validate();
    risk.validate();
    if (bev.frame != Frame::Bev)
        throw FrameMismatch("global risk requires a BEV heatmap");
    if (bev.height != risk.height || bev.width != risk.width)
        throw DimensionMismatch("risk map dimensions do not match the BEV map");

    const BinaryMask mask = risk_mask(risk, cfg);
    std::vector<double> masked(bev.size());
    for (std::size_t i = 0; i < bev.size(); ++i)
        masked[i] = mask.values[i] ? bev.values[i] : 0.0;
    const double s = bev.grid->scale;
    const double area = s * s * static_cast<double>(bev.height) * bev.width;
    return pairwise_sum(masked) / area;
}

double global_risk(const Heatmap& bev, const RiskConfig& cfg, ConvPath path) {
    return global_risk(bev, risk_map(bev, cfg, path), cfg);
}

std::vector<double> individual_risks(const KeypointSet& persons_bev,
                                     const Heatmap& risk) {
    if (persons_bev.frame != Frame::Bev)
        throw FrameMismatch("individual risks require BEV keypoints");
    risk.validate();
    std::vector<double> out;
    out.reserve(persons_bev.size());
    for (const Point2& p : persons_bev.points)
        out.push_back(bilinear_sample(risk, p.x, p.y));
    return out;
}

} // namespace bevkit
