#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "bevkit/simulator.hpp"

namespace bevkit {

// JSON scene schema:
//   camera: {height_m, pitch_deg, fu, fv, uc, vc, image_w, image_h}
//   persons: [{x_m, y_m, height_m, visible_feet}]
//   annotations (optional): [{head_uv: [u, v], feet_uv: [u, v]}]
// Angles cross the boundary in degrees, pitch_deg in (0, 90]; internal
// poses use radians. Schema violations raise IoError.
nlohmann::json scene_to_json(const Scene& scene,
                             const std::vector<PersonAnnotation>* annotations = nullptr);
Scene scene_from_json(const nlohmann::json& j);

void write_scene(const std::filesystem::path& path, const Scene& scene,
                 const std::vector<PersonAnnotation>* annotations = nullptr);
Scene read_scene(const std::filesystem::path& path);

// SceneConfig as a JSON object; unknown keys raise IoError so typos in
// config files fail loudly. Every field is optional with its default.
SceneConfig scene_config_from_json(const nlohmann::json& j);
SceneConfig read_scene_config(const std::filesystem::path& path);

} // namespace bevkit
