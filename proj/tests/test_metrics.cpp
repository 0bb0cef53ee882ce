#include <doctest.h>

#include <cmath>
#include <vector>

#include "bevkit/errors.hpp"
#include "bevkit/geometry.hpp"
#include "bevkit/heatmap.hpp"
#include "bevkit/metrics.hpp"
#include "oracles.hpp"

using namespace bevkit;
using oracles::TestRng;
using oracles::make_points;

namespace {

BevGrid synthetic_grid(int size, double scale) {
    BevGrid g;
    g.height = size;
    g.width = size;
    g.scale = scale;
    g.x_center = 5.0;
    g.x_bottom_center = 5.0 - scale * size / 2.0;
    return g;
}

} // namespace

TEST_CASE("chamfer distance on the 3-4-5 pair") {
    const KeypointSet pred = make_points(Frame::WorldGround, {{0.0, 0.0}});
    const KeypointSet truth = make_points(Frame::WorldGround, {{3.0, 4.0}});
    const LocalizationResult r = chamfer(pred, truth, 1.5);
    CHECK(r.chamfer_m == doctest::Approx(10.0).epsilon(1e-12));
    // Normalized by twice the safe distance: 10 / 3 of it.
    CHECK(r.chamfer_normalized == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("chamfer is symmetric bitwise") {
    TestRng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        KeypointSet a, b;
        a.frame = b.frame = Frame::WorldGround;
        const int na = rng.uniform_int(1, 8);
        const int nb = rng.uniform_int(1, 8);
        for (int i = 0; i < na; ++i)
            a.points.push_back({rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)});
        for (int i = 0; i < nb; ++i)
            b.points.push_back({rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)});
        const LocalizationResult ab = chamfer(a, b, 1.5);
        const LocalizationResult ba = chamfer(b, a, 1.5);
        CHECK(ab.chamfer_m == ba.chamfer_m);
        CHECK(ab.chamfer_normalized == ba.chamfer_normalized);
    }
}

TEST_CASE("chamfer scale equivariance") {
    TestRng rng(62);
    KeypointSet a, b;
    a.frame = b.frame = Frame::WorldGround;
    for (int i = 0; i < 6; ++i) {
        a.points.push_back({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)});
        b.points.push_back({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)});
    }
    const double base = chamfer(a, b, 1.5).chamfer_m;
    const double k = 3.5;
    KeypointSet ka = a, kb = b;
    for (Point2& p : ka.points) p = k * p;
    for (Point2& p : kb.points) p = k * p;
    const double scaled = chamfer(ka, kb, 1.5).chamfer_m;
    CHECK(scaled == doctest::Approx(k * base).epsilon(1e-12));
}

TEST_CASE("chamfer with an extra matched point") {
    const KeypointSet pred = make_points(Frame::WorldGround, {{0.0, 0.0}});
    const KeypointSet truth =
        make_points(Frame::WorldGround, {{3.0, 4.0}, {0.0, 0.0}});
    const LocalizationResult r = chamfer(pred, truth, 1.5);
    // Forward mean 0, backward mean (5 + 0) / 2.
    CHECK(r.chamfer_m == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("chamfer edge cases and frame checks") {
    KeypointSet empty;
    empty.frame = Frame::WorldGround;
    const KeypointSet one = make_points(Frame::WorldGround, {{1.0, 2.0}});

    CHECK(chamfer(empty, empty, 1.5).chamfer_m == 0.0);

    CHECK_THROWS_WITH_AS(chamfer(empty, one, 1.5),
                         "chamfer distance undefined for one empty set",
                         UndefinedMetric);
    try {
        chamfer(empty, one, 1.5);
    } catch (const UndefinedMetric& e) {
        CHECK(e.prediction_empty);
        CHECK_FALSE(e.truth_empty);
    }
    try {
        chamfer(one, empty, 1.5);
    } catch (const UndefinedMetric& e) {
        CHECK_FALSE(e.prediction_empty);
        CHECK(e.truth_empty);
    }

    CHECK_THROWS_AS(chamfer(make_points(Frame::Bev, {{1.0, 1.0}}), one, 1.5),
                    FrameMismatch);
    CHECK_THROWS_AS(chamfer(one, one, 0.0), DegenerateGeometry);
}

TEST_CASE("peak extraction finds isolated impulse splats exactly") {
    const BevGrid grid = synthetic_grid(128, 0.05);
    RasterConfig cfg;
    cfg.mode = RasterMode::Impulse;
    // 7 px apart, beyond the 5x5 suppression window.
    const KeypointSet pts =
        make_points(Frame::Bev, {{100.0, 100.0}, {107.0, 100.0}});
    const Heatmap bev = rasterize(pts, 128, 128, cfg, grid);
    const KeypointSet det = extract_locations(bev);
    CHECK(det.frame == Frame::WorldGround);
    REQUIRE(det.points.size() == 2);

    // Detections come back in row-major pixel order and map through the
    // grid's world transform.
    const Homography to_world = world_from_bev(grid);
    const Point2 w0 = to_world.apply({100.0, 100.0});
    const Point2 w1 = to_world.apply({107.0, 100.0});
    CHECK(det.points[0].x == doctest::Approx(w0.x).epsilon(1e-12));
    CHECK(det.points[0].y == doctest::Approx(w0.y).epsilon(1e-12));
    CHECK(det.points[1].y == doctest::Approx(w1.y).epsilon(1e-12));
}

TEST_CASE("a flat plateau yields exactly one detection at its first pixel") {
    const BevGrid grid = synthetic_grid(64, 0.05);
    Heatmap bev = Heatmap::zeros(Frame::Bev, 64, 64, grid);
    // 2x2 plateau from a perfectly centered impulse splat.
    bev.at(30, 40) = 0.25;
    bev.at(30, 41) = 0.25;
    bev.at(31, 40) = 0.25;
    bev.at(31, 41) = 0.25;
    const KeypointSet det = extract_locations(bev);
    REQUIRE(det.points.size() == 1);
    const Point2 expect = world_from_bev(grid).apply({40.0, 30.0});
    CHECK(det.points[0].x == doctest::Approx(expect.x).epsilon(1e-12));
    CHECK(det.points[0].y == doctest::Approx(expect.y).epsilon(1e-12));
}

TEST_CASE("peaks below the detection threshold are ignored") {
    const BevGrid grid = synthetic_grid(64, 0.05);
    Heatmap bev = Heatmap::zeros(Frame::Bev, 64, 64, grid);
    bev.at(10, 10) = 5e-4; // under the 1e-3 floor
    CHECK(extract_locations(bev).points.empty());
    bev.at(10, 10) = 2e-3;
    CHECK(extract_locations(bev).points.size() == 1);
}

TEST_CASE("gaussian detection lands within half a pixel diagonal") {
    TestRng rng(63);
    RasterConfig cfg;
    for (int trial = 0; trial < 30; ++trial) {
        const double scale = rng.uniform(0.01, 0.08);
        const BevGrid grid = synthetic_grid(128, scale);
        const Point2 bev_pos{rng.uniform(30.0, 98.0), rng.uniform(30.0, 98.0)};
        const Heatmap bev =
            rasterize(make_points(Frame::Bev, {bev_pos}), 128, 128, cfg, grid);
        const KeypointSet det = extract_locations(bev);
        REQUIRE(det.points.size() == 1);

        const Point2 truth = world_from_bev(grid).apply(bev_pos);
        const double err = std::hypot(det.points[0].x - truth.x,
                                      det.points[0].y - truth.y);
        CHECK(err <= scale * std::sqrt(2.0) / 2.0 + 1e-12);
    }
}

TEST_CASE("extraction validates frame and window") {
    const Heatmap img = Heatmap::zeros(Frame::ImageView, 32, 32);
    CHECK_THROWS_AS(extract_locations(img), FrameMismatch);

    const BevGrid grid = synthetic_grid(32, 0.05);
    const Heatmap bev = Heatmap::zeros(Frame::Bev, 32, 32, grid);
    NmsConfig bad;
    bad.window = 4;
    CHECK_THROWS_AS(extract_locations(bev, bad), DimensionMismatch);
}

TEST_CASE("risk mask IoU") {
    auto make_mask = [](int h, int w, std::vector<std::uint8_t> v) {
        BinaryMask m;
        m.height = h;
        m.width = w;
        m.values = std::move(v);
        return m;
    };
    // Two 2x4 bands of a 3x4 raster overlapping in the middle row.
    const BinaryMask a = make_mask(3, 4, {1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0});
    const BinaryMask b = make_mask(3, 4, {0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(risk_iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(risk_iou(a, a) == 1.0);

    const BinaryMask empty = make_mask(3, 4, std::vector<std::uint8_t>(12, 0));
    CHECK(risk_iou(empty, empty) == 1.0);
    CHECK(risk_iou(a, empty) == 0.0);

    const BinaryMask other = make_mask(2, 4, std::vector<std::uint8_t>(8, 0));
    CHECK_THROWS_AS(risk_iou(a, other), DimensionMismatch);
}

TEST_CASE("global risk MSE matches a long-double oracle") {
    TestRng rng(64);
    std::vector<double> pred(40), truth(40), sq(40);
    for (int i = 0; i < 40; ++i) {
        pred[i] = rng.uniform(0.0, 2.0);
        truth[i] = rng.uniform(0.0, 2.0);
        sq[i] = (pred[i] - truth[i]) * (pred[i] - truth[i]);
    }
    const double got = global_risk_mse(pred, truth);
    const double want = oracles::naive_sum(sq) / 40.0;
    CHECK(std::abs(got - want) < 1e-12);

    CHECK(global_risk_mse(pred, pred) == 0.0);
    CHECK_THROWS_AS(global_risk_mse(std::vector<double>{1.0}, truth),
                    DimensionMismatch);
    CHECK_THROWS_AS(global_risk_mse(std::vector<double>{}, std::vector<double>{}),
                    UndefinedMetric);
}
