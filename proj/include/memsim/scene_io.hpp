#pragma once

#include <string>

#include <json.hpp>

#include "memsim/scene.hpp"

namespace memsim {

// Scene file:
//   {"rooms": [{"id", "aabb": {"min": [x,y,z], "max": [x,y,z]},
//               "objects": [{"name", "id", "aabb", "movable", "nested_in"?: "name(id)"}]}],
//    "global_floor_elevations"?: [...]}
Scene scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const Scene& scene);
Scene load_scene(const std::string& path);

// Labeled-surfaces file:
//   {"rooms": [{"id", "floor"?: [[x,y,z],...], "ceiling"?: [...],
//               "objects": [{"name", "vertices": [[x,y,z],...], "movable"?}]}]}
LabeledSurfaces surfaces_from_json(const nlohmann::json& doc);
nlohmann::json surfaces_to_json(const LabeledSurfaces& surfaces);
LabeledSurfaces load_surfaces(const std::string& path);

nlohmann::json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);
nlohmann::json aabb_to_json(const Aabb& box);
Aabb aabb_from_json(const nlohmann::json& j);

}  // namespace memsim
