#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bevkit/errors.hpp"
#include "bevkit/gridfile.hpp"
#include "bevkit/scenefile.hpp"
#include "oracles.hpp"

using namespace bevkit;
using nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("bevkit_test_" + name);
}

Heatmap sample_bev_map() {
    BevGrid g;
    g.height = 3;
    g.width = 4;
    g.scale = 0.02;
    g.x_center = 7.5; // dropped on load; files are anchor-relative
    g.x_bottom_center = 7.5 - 0.02 * 1.5;
    Heatmap m = Heatmap::zeros(Frame::Bev, 3, 4, g);
    oracles::TestRng rng(81);
    for (double& v : m.values)
        v = static_cast<double>(static_cast<float>(rng.uniform(0.0, 2.0)));
    m.values.back() = 1.5; // keep the sign-flip mutation meaningful
    return m;
}

Scene sample_scene_fixture() {
    Scene s;
    s.intr.fu = 640.0;
    s.intr.fv = 700.0;
    s.intr.uc = 250.0;
    s.intr.vc = 260.0;
    s.intr.image_w = 512;
    s.intr.image_h = 512;
    s.pose.height_m = 7.25;
    s.pose.pitch_rad = 0.6;
    Person a, b;
    a.x_m = 10.123456789012345;
    a.y_m = -0.75;
    a.height_m = 1.66;
    a.visible_feet = false;
    b.x_m = 12.0;
    b.y_m = 1.5;
    b.height_m = 1.84;
    s.persons = {a, b};
    return s;
}

} // namespace

TEST_CASE("grid bytes lay out the documented header") {
    Heatmap m = Heatmap::zeros(Frame::ImageView, 1, 2);
    m.values = {1.0, 0.5};
    const std::vector<std::uint8_t> bytes = grid_to_bytes(m);

    const std::vector<std::uint8_t> expect = {
        'B', 'E', 'V', 'G',     // magic
        0x01, 0x00,             // version 1
        0x00,                   // image-view frame tag
        0x01, 0x00, 0x00, 0x00, // height 1
        0x02, 0x00, 0x00, 0x00, // width 2
        0, 0, 0, 0, 0, 0, 0, 0, // scale 0.0
        0x00, 0x00, 0x80, 0x3F, // 1.0f
        0x00, 0x00, 0x00, 0x3F, // 0.5f
    };
    CHECK(bytes == expect);
}

TEST_CASE("BEV grid files round-trip values and scale") {
    const Heatmap m = sample_bev_map();
    const Heatmap back = grid_from_bytes(grid_to_bytes(m));

    CHECK(back.frame == Frame::Bev);
    CHECK(back.height == m.height);
    CHECK(back.width == m.width);
    REQUIRE(back.grid.has_value());
    CHECK(back.grid->scale == m.grid->scale);
    // Values were float-exact, so they survive bitwise.
    CHECK(back.values == m.values);

    // The anchor is not stored: loaded grids are centered at the world
    // origin with the bottom edge half a grid forward of it.
    CHECK(back.grid->x_center == 0.0);
    CHECK(back.grid->y_center == 0.0);
    CHECK(back.grid->x_bottom_center == -m.grid->scale * m.height / 2.0);
}

TEST_CASE("grid serialization narrows to float32") {
    Heatmap m = Heatmap::zeros(Frame::ImageView, 1, 1);
    m.values = {0.1};
    const Heatmap back = grid_from_bytes(grid_to_bytes(m));
    CHECK(back.values[0] == static_cast<double>(static_cast<float>(0.1)));
    CHECK(back.values[0] != 0.1);
}

TEST_CASE("grid files survive the filesystem") {
    const Heatmap m = sample_bev_map();
    const std::filesystem::path path = temp_file("roundtrip.bevg");
    write_grid(path, m);
    const Heatmap back = read_grid(path);
    CHECK(back.values == m.values);
    CHECK(back.grid->scale == m.grid->scale);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_grid(temp_file("missing.bevg")), IoError);
}

TEST_CASE("grid parsing rejects malformed input") {
    const std::vector<std::uint8_t> good = grid_to_bytes(sample_bev_map());

    auto mutate = [&](std::size_t at, std::uint8_t value) {
        std::vector<std::uint8_t> b = good;
        b[at] = value;
        return b;
    };

    CHECK_THROWS_AS(grid_from_bytes(mutate(0, 'X')), IoError);  // magic
    CHECK_THROWS_AS(grid_from_bytes(mutate(4, 2)), IoError);    // version
    CHECK_THROWS_AS(grid_from_bytes(mutate(6, 2)), IoError);    // frame tag

    std::vector<std::uint8_t> truncated = good;
    truncated.pop_back();
    CHECK_THROWS_AS(grid_from_bytes(truncated), IoError);

    std::vector<std::uint8_t> trailing = good;
    trailing.push_back(0);
    CHECK_THROWS_AS(grid_from_bytes(trailing), IoError);

    // Zero height.
    std::vector<std::uint8_t> zero_dim = good;
    for (int i = 0; i < 4; ++i) zero_dim[7 + i] = 0;
    CHECK_THROWS_AS(grid_from_bytes(zero_dim), IoError);

    // Height beyond the sanity bound, caught before the payload check.
    std::vector<std::uint8_t> huge = good;
    huge[7] = 0x01;
    huge[8] = 0x00;
    huge[9] = 0x10; // 0x100001 = 2^20 + 1
    huge[10] = 0x00;
    CHECK_THROWS_AS(grid_from_bytes(huge), IoError);

    // A BEV file must carry a positive finite scale.
    std::vector<std::uint8_t> zero_scale = good;
    for (int i = 0; i < 8; ++i) zero_scale[15 + i] = 0;
    CHECK_THROWS_AS(grid_from_bytes(zero_scale), IoError);

    // An image-view file must carry scale zero.
    Heatmap img = Heatmap::zeros(Frame::ImageView, 3, 4);
    std::vector<std::uint8_t> img_bytes = grid_to_bytes(img);
    img_bytes[15] = 0x01;
    CHECK_THROWS_AS(grid_from_bytes(img_bytes), IoError);

    // Negative and non-finite payload values.
    std::vector<std::uint8_t> negative = good;
    negative[negative.size() - 1] |= 0x80; // flip the f32 sign bit
    CHECK_THROWS_AS(grid_from_bytes(negative), IoError);

    std::vector<std::uint8_t> inf = good;
    inf[inf.size() - 4] = 0x00;
    inf[inf.size() - 3] = 0x00;
    inf[inf.size() - 2] = 0x80;
    inf[inf.size() - 1] = 0x7F;
    CHECK_THROWS_AS(grid_from_bytes(inf), IoError);
}

TEST_CASE("grid writing rejects unserializable maps") {
    Heatmap world = Heatmap::zeros(Frame::WorldGround, 2, 2);
    CHECK_THROWS_AS(grid_to_bytes(world), IoError);

    Heatmap overflow = Heatmap::zeros(Frame::ImageView, 1, 1);
    overflow.values = {1e39}; // not representable as float32
    CHECK_THROWS_AS(grid_to_bytes(overflow), IoError);
}

TEST_CASE("scenes round-trip through JSON") {
    const Scene s = sample_scene_fixture();
    const std::filesystem::path path = temp_file("scene.json");
    write_scene(path, s);
    const Scene back = read_scene(path);
    std::filesystem::remove(path);

    // Positions and heights print with enough digits to round-trip
    // exactly; the pitch crosses the boundary in degrees.
    CHECK(back.pose.height_m == s.pose.height_m);
    CHECK(std::abs(back.pose.pitch_rad - s.pose.pitch_rad) < 1e-14);
    CHECK(back.intr.fu == s.intr.fu);
    CHECK(back.intr.image_h == s.intr.image_h);
    REQUIRE(back.persons.size() == 2);
    CHECK(back.persons[0].x_m == s.persons[0].x_m);
    CHECK(back.persons[0].visible_feet == false);
    CHECK(back.persons[1].height_m == s.persons[1].height_m);
    CHECK(back.persons[1].visible_feet == true);
}

TEST_CASE("scene annotations serialize alongside persons") {
    const Scene s = sample_scene_fixture();
    const std::vector<PersonAnnotation> ann = annotate(s);
    const json j = scene_to_json(s, &ann);
    REQUIRE(j.contains("annotations"));
    REQUIRE(j["annotations"].size() == 2);
    CHECK(j["annotations"][0]["head_uv"].size() == 2);
    CHECK(j["annotations"][1]["feet_uv"][0].get<double>() ==
          doctest::Approx(ann[1].feet_uv.x).epsilon(1e-12));

    const std::vector<PersonAnnotation> wrong(1);
    CHECK_THROWS_AS(scene_to_json(s, &wrong), IoError);
}

TEST_CASE("scene parsing rejects schema violations") {
    const json good = scene_to_json(sample_scene_fixture());

    json j = good;
    j.erase("camera");
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    j = good;
    j["persons"] = 5;
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    j = good;
    j["camera"].erase("fu");
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    j = good;
    j["camera"]["pitch_deg"] = "steep";
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    j = good;
    j["camera"]["pitch_deg"] = 0.0;
    CHECK_THROWS_AS(scene_from_json(j), IoError);
    j["camera"]["pitch_deg"] = 90.5;
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    j = good;
    j["persons"][0].erase("x_m");
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    j = good;
    j["persons"][0]["visible_feet"] = 1;
    CHECK_THROWS_AS(scene_from_json(j), IoError);

    // Physically invalid content is wrapped into the I/O error domain.
    j = good;
    j["persons"][0]["height_m"] = 0.5;
    CHECK_THROWS_AS(scene_from_json(j), IoError);
}

TEST_CASE("scene configs parse with defaults and strict keys") {
    const SceneConfig dflt = scene_config_from_json(json::object());
    CHECK(dflt.n_min == 5);
    CHECK(dflt.n_max == 50);
    CHECK(dflt.bev_size == 512);
    CHECK(dflt.seed == 0);

    json j = {{"n_min", 3}, {"n_max", 9}, {"seed", 123456789},
              {"pitch_min_deg", 30.0}, {"min_separation_bev_px", 7.0}};
    const SceneConfig cfg = scene_config_from_json(j);
    CHECK(cfg.n_min == 3);
    CHECK(cfg.n_max == 9);
    CHECK(cfg.seed == 123456789);
    CHECK(cfg.pitch_min_deg == 30.0);
    CHECK(cfg.min_separation_bev_px == 7.0);
    CHECK(cfg.focal_min_px == 500.0); // untouched default

    CHECK_THROWS_AS(scene_config_from_json(json{{"n_mni", 3}}), IoError);
    CHECK_THROWS_AS(scene_config_from_json(json{{"n_min", "three"}}), IoError);
    CHECK_THROWS_AS(scene_config_from_json(json::array()), IoError);
    CHECK_THROWS_AS(scene_config_from_json(json{{"n_min", 9}, {"n_max", 3}}),
                    IoError);
    CHECK_THROWS_AS(scene_config_from_json(json{{"pitch_max_deg", 100.0}}),
                    IoError);
}

TEST_CASE("scene files with broken JSON fail as I/O errors") {
    const std::filesystem::path path = temp_file("broken.json");
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(read_scene(path), IoError);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_scene(temp_file("missing.json")), IoError);
    CHECK_THROWS_AS(read_scene_config(temp_file("missing.json")), IoError);
}
