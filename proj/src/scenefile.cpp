#include "bevkit/scenefile.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {
constexpr double kPi = 3.14159265358979323846;

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw IoError(std::string("scene file: missing or non-numeric '") + key + "'");
    return j[key].get<double>();
}

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void dump_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        throw IoError("cannot open for writing: " + path.string());
    f << j.dump(2) << '\n';
    if (!f)
        throw IoError("write failed: " + path.string());
}
} // namespace

nlohmann::json scene_to_json(const Scene& scene,
                             const std::vector<PersonAnnotation>* annotations) {
    scene.validate();
    nlohmann::json j;
    j["camera"] = {
        {"height_m", scene.pose.height_m},
        {"pitch_deg", scene.pose.pitch_rad * 180.0 / kPi},
        {"fu", scene.intr.fu},
        {"fv", scene.intr.fv},
        {"uc", scene.intr.uc},
        {"vc", scene.intr.vc},
        {"image_w", scene.intr.image_w},
        {"image_h", scene.intr.image_h},
    };
    j["persons"] = nlohmann::json::array();
    for (const Person& p : scene.persons)
        j["persons"].push_back({{"x_m", p.x_m},
                                {"y_m", p.y_m},
                                {"height_m", p.height_m},
                                {"visible_feet", p.visible_feet}});
    if (annotations) {
        if (annotations->size() != scene.persons.size())
            throw IoError("scene file: annotation count does not match persons");
        j["annotations"] = nlohmann::json::array();
        for (const PersonAnnotation& a : *annotations)
            j["annotations"].push_back({{"head_uv", {a.head_uv.x, a.head_uv.y}},
                                        {"feet_uv", {a.feet_uv.x, a.feet_uv.y}}});
    }
    return j;
}

Scene scene_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("camera") || !j.contains("persons"))
        throw IoError("scene file: expected an object with 'camera' and 'persons'");
    const nlohmann::json& cam = j["camera"];

    Scene scene;
    scene.pose.height_m = require_number(cam, "height_m");
    const double pitch_deg = require_number(cam, "pitch_deg");
    if (!(pitch_deg > 0.0) || !(pitch_deg <= 90.0))
        throw IoError("scene file: pitch_deg must lie in (0, 90]");
    scene.pose.pitch_rad = pitch_deg * kPi / 180.0;
    scene.intr.fu = require_number(cam, "fu");
    scene.intr.fv = require_number(cam, "fv");
    scene.intr.uc = require_number(cam, "uc");
    scene.intr.vc = require_number(cam, "vc");
    scene.intr.image_w = static_cast<int>(require_number(cam, "image_w"));
    scene.intr.image_h = static_cast<int>(require_number(cam, "image_h"));

    if (!j["persons"].is_array())
        throw IoError("scene file: 'persons' must be an array");
    for (const nlohmann::json& pj : j["persons"]) {
        Person p;
        p.x_m = require_number(pj, "x_m");
        p.y_m = require_number(pj, "y_m");
        p.height_m = require_number(pj, "height_m");
        if (!pj.contains("visible_feet") || !pj["visible_feet"].is_boolean())
            throw IoError("scene file: missing or non-boolean 'visible_feet'");
        p.visible_feet = pj["visible_feet"].get<bool>();
        scene.persons.push_back(p);
    }
    try {
        scene.validate();
    } catch (const Error& e) {
        throw IoError(std::string("scene file: ") + e.what());
    }
    return scene;
}

void write_scene(const std::filesystem::path& path, const Scene& scene,
                 const std::vector<PersonAnnotation>* annotations) {
    dump_json(path, scene_to_json(scene, annotations));
}

Scene read_scene(const std::filesystem::path& path) {
    return scene_from_json(load_json(path));
}

SceneConfig scene_config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw IoError("scene config: expected a JSON object");
    SceneConfig cfg;
    const std::set<std::string> known = {
        "n_min", "n_max", "cluster_fraction", "cluster_spread_m",
        "height_mean_m", "height_std_m", "pitch_min_deg", "pitch_max_deg",
        "camera_height_min_m", "camera_height_max_m", "focal_min_px",
        "focal_max_px", "image_w", "image_h", "bev_size",
        "min_separation_m", "min_separation_bev_px", "seed"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key))
            throw IoError("scene config: unknown key '" + key + "'");
        if (!value.is_number())
            throw IoError("scene config: '" + key + "' must be numeric");
    }
    auto num = [&](const char* key, double dflt) {
        return j.contains(key) ? j[key].get<double>() : dflt;
    };
    cfg.n_min = static_cast<int>(num("n_min", cfg.n_min));
    cfg.n_max = static_cast<int>(num("n_max", cfg.n_max));
    cfg.cluster_fraction = num("cluster_fraction", cfg.cluster_fraction);
    cfg.cluster_spread_m = num("cluster_spread_m", cfg.cluster_spread_m);
    cfg.height_mean_m = num("height_mean_m", cfg.height_mean_m);
    cfg.height_std_m = num("height_std_m", cfg.height_std_m);
    cfg.pitch_min_deg = num("pitch_min_deg", cfg.pitch_min_deg);
    cfg.pitch_max_deg = num("pitch_max_deg", cfg.pitch_max_deg);
    cfg.camera_height_min_m = num("camera_height_min_m", cfg.camera_height_min_m);
    cfg.camera_height_max_m = num("camera_height_max_m", cfg.camera_height_max_m);
    cfg.focal_min_px = num("focal_min_px", cfg.focal_min_px);
    cfg.focal_max_px = num("focal_max_px", cfg.focal_max_px);
    cfg.image_w = static_cast<int>(num("image_w", cfg.image_w));
    cfg.image_h = static_cast<int>(num("image_h", cfg.image_h));
    cfg.bev_size = static_cast<int>(num("bev_size", cfg.bev_size));
    cfg.min_separation_m = num("min_separation_m", cfg.min_separation_m);
    cfg.min_separation_bev_px = num("min_separation_bev_px", cfg.min_separation_bev_px);
    if (j.contains("seed"))
        cfg.seed = j["seed"].get<std::uint64_t>();
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw IoError(std::string("scene config: ") + e.what());
    }
    return cfg;
}

SceneConfig read_scene_config(const std::filesystem::path& path) {
    return scene_config_from_json(load_json(path));
}

} // namespace bevkit
