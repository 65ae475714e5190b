#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memsim/object_ref.hpp"

namespace memsim {

// Meters, +y up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

struct Aabb {
  Vec3 min;
  Vec3 max;

  bool operator==(const Aabb&) const = default;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  bool valid() const {
    return min.finite() && max.finite() && min.x <= max.x && min.y <= max.y && min.z <= max.z;
  }
  bool contains(const Vec3& p, double eps) const {
    return p.x >= min.x - eps && p.x <= max.x + eps && p.y >= min.y - eps &&
           p.y <= max.y + eps && p.z >= min.z - eps && p.z <= max.z + eps;
  }
  Aabb translated(const Vec3& offset) const { return {min + offset, max + offset}; }
};

// Tolerance for "object center inside its room".
inline constexpr double kRoomContainmentEps = 1e-6;
// Merge tolerance for the scene-wide floor elevation set.
inline constexpr double kFloorElevationMergeTol = 1e-4;

struct ObjectInstance {
  std::string name;
  int id = 0;
  Aabb aabb;
  int home_room = 0;
  bool movable = false;
  // Containment link to another object in the same room.
  std::optional<ObjectRef> nested_in;

  ObjectRef ref() const { return {name, id}; }
  bool operator==(const ObjectInstance&) const = default;
};

struct Room {
  int id = 0;
  Aabb aabb;
  // Kept sorted by (name, id).
  std::vector<ObjectInstance> objects;

  const ObjectInstance* find(const ObjectRef& ref) const;
  // Direct children linked via `nested_in`.
  std::vector<ObjectRef> nested_children(const ObjectRef& parent) const;

  bool operator==(const Room&) const = default;
};

struct Scene {
  std::map<int, Room> rooms;
  std::vector<double> global_floor_elevations;

  const Room* find_room(int id) const;
  bool operator==(const Scene&) const = default;
};

// Checks every scene invariant: valid boxes, unique (name, id) per room, object
// centers inside rooms, nearest-to-origin id ordering, resolvable and acyclic
// nesting. Throws InputError naming the first violation.
void check_scene(const Scene& scene);

struct ObjectVertices {
  std::string name;
  std::vector<Vec3> vertices;
  bool movable = false;
};

struct RoomSurfaces {
  int id = 0;
  std::optional<std::vector<Vec3>> floor;
  std::optional<std::vector<Vec3>> ceiling;
  std::vector<ObjectVertices> objects;
};

struct LabeledSurfaces {
  std::vector<RoomSurfaces> rooms;
};

// Sorted, deduplicated minimum heights of every floor surface in the scan.
std::vector<double> collect_floor_elevations(const LabeledSurfaces& surfaces);

// Room box from its floor/ceiling clouds; nullopt means the room is discarded
// (neither surface present). Other rooms' points are only seen through
// `floor_elevations`.
std::optional<Aabb> build_room_aabb(const RoomSurfaces& room,
                                    const std::vector<double>& floor_elevations);

Aabb build_object_aabb(const std::vector<Vec3>& vertices);

// Renumbers instances per name by AABB-center distance to the origin (ties by
// lexicographic center). Nesting links are remapped to the new ids.
Room assign_instance_ids(Room room);

struct SceneBuild {
  Scene scene;
  std::vector<int> discarded_rooms;
};

// Full labeled-surfaces -> scene pipeline.
SceneBuild build_scene(const LabeledSurfaces& surfaces);

}  // namespace memsim
