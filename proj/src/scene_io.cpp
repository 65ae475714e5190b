#include "memsim/scene_io.hpp"

#include <algorithm>

#include "memsim/error.hpp"
#include "memsim/json_util.hpp"

namespace memsim {

using nlohmann::json;

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("expected [x, y, z]");
  return {require_number(j[0], "x"), require_number(j[1], "y"), require_number(j[2], "z")};
}

json aabb_to_json(const Aabb& box) {
  return {{"min", vec3_to_json(box.min)}, {"max", vec3_to_json(box.max)}};
}

Aabb aabb_from_json(const json& j) {
  Aabb box{vec3_from_json(require(j, "min")), vec3_from_json(require(j, "max"))};
  if (!box.valid()) throw InputError("aabb min exceeds max");
  return box;
}

namespace {

std::vector<Vec3> points_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of points");
  std::vector<Vec3> pts;
  pts.reserve(j.size());
  for (const auto& p : j) pts.push_back(vec3_from_json(p));
  if (pts.empty()) throw InputError(what + ": point set is empty");
  return pts;
}

json points_to_json(const std::vector<Vec3>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(vec3_to_json(p));
  return arr;
}

}  // namespace

Scene scene_from_json(const json& doc) {
  Scene scene;
  const auto& rooms = require(doc, "rooms");
  if (!rooms.is_array()) throw InputError("'rooms' must be an array");
  for (const auto& rj : rooms) {
    Room room;
    room.id = require_int(rj, "id");
    const std::string where = "room " + std::to_string(room.id);
    try {
      room.aabb = aabb_from_json(require(rj, "aabb"));
      if (rj.contains("objects")) {
        for (const auto& oj : rj.at("objects")) {
          ObjectInstance o;
          o.name = require(oj, "name").get<std::string>();
          o.id = require_int(oj, "id");
          o.aabb = aabb_from_json(require(oj, "aabb"));
          o.home_room = room.id;
          o.movable = oj.value("movable", false);
          if (oj.contains("nested_in") && !oj.at("nested_in").is_null()) {
            o.nested_in = parse_object_ref(oj.at("nested_in").get<std::string>());
          }
          room.objects.push_back(std::move(o));
        }
      }
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    std::sort(room.objects.begin(), room.objects.end(),
              [](const ObjectInstance& a, const ObjectInstance& b) { return a.ref() < b.ref(); });
    if (!scene.rooms.emplace(room.id, std::move(room)).second) {
      throw InputError("duplicate " + where);
    }
  }
  if (doc.contains("global_floor_elevations")) {
    for (const auto& v : doc.at("global_floor_elevations")) {
      scene.global_floor_elevations.push_back(require_number(v, "floor elevation"));
    }
    std::sort(scene.global_floor_elevations.begin(), scene.global_floor_elevations.end());
  }
  check_scene(scene);
  return scene;
}

json scene_to_json(const Scene& scene) {
  json rooms = json::array();
  for (const auto& [id, room] : scene.rooms) {
    json objects = json::array();
    for (const auto& o : room.objects) {
      json oj = {{"name", o.name}, {"id", o.id}, {"aabb", aabb_to_json(o.aabb)}, {"movable", o.movable}};
      if (o.nested_in) oj["nested_in"] = o.nested_in->str();
      objects.push_back(std::move(oj));
    }
    rooms.push_back({{"id", id}, {"aabb", aabb_to_json(room.aabb)}, {"objects", std::move(objects)}});
  }
  json doc = {{"rooms", std::move(rooms)}};
  if (!scene.global_floor_elevations.empty()) {
    doc["global_floor_elevations"] = scene.global_floor_elevations;
  }
  return doc;
}

Scene load_scene(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    return scene_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

LabeledSurfaces surfaces_from_json(const json& doc) {
  LabeledSurfaces out;
  const auto& rooms = require(doc, "rooms");
  if (!rooms.is_array()) throw InputError("'rooms' must be an array");
  for (const auto& rj : rooms) {
    RoomSurfaces rs;
    rs.id = require_int(rj, "id");
    const std::string where = "room " + std::to_string(rs.id);
    try {
      if (rj.contains("floor") && !rj.at("floor").is_null()) {
        rs.floor = points_from_json(rj.at("floor"), where + " floor");
      }
      if (rj.contains("ceiling") && !rj.at("ceiling").is_null()) {
        rs.ceiling = points_from_json(rj.at("ceiling"), where + " ceiling");
      }
      if (rj.contains("objects")) {
        for (const auto& oj : rj.at("objects")) {
          ObjectVertices ov;
          ov.name = require(oj, "name").get<std::string>();
          ov.vertices = points_from_json(require(oj, "vertices"), where + " " + ov.name);
          ov.movable = oj.value("movable", false);
          rs.objects.push_back(std::move(ov));
        }
      }
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    out.rooms.push_back(std::move(rs));
  }
  return out;
}

json surfaces_to_json(const LabeledSurfaces& surfaces) {
  json rooms = json::array();
  for (const auto& rs : surfaces.rooms) {
    json rj = {{"id", rs.id}};
    if (rs.floor) rj["floor"] = points_to_json(*rs.floor);
    if (rs.ceiling) rj["ceiling"] = points_to_json(*rs.ceiling);
    json objects = json::array();
    for (const auto& ov : rs.objects) {
      objects.push_back(
          {{"name", ov.name}, {"vertices", points_to_json(ov.vertices)}, {"movable", ov.movable}});
    }
    rj["objects"] = std::move(objects);
    rooms.push_back(std::move(rj));
  }
  return {{"rooms", std::move(rooms)}};
}

LabeledSurfaces load_surfaces(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    return surfaces_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace memsim
