#include "memsim/scene.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "memsim/error.hpp"

namespace memsim {

namespace {

void check_points(const std::vector<Vec3>& points, const std::string& what) {
  if (points.empty()) throw InputError(what + ": point set is empty");
  for (const auto& p : points) {
    if (!p.finite()) throw InputError(what + ": non-finite coordinate");
  }
}

bool center_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

// Instance order for id assignment: distance to origin, then lexicographic center.
bool instance_before(const ObjectInstance& a, const ObjectInstance& b) {
  const Vec3 ca = a.aabb.center();
  const Vec3 cb = b.aabb.center();
  const double da = ca.norm();
  const double db = cb.norm();
  if (da != db) return da < db;
  return center_less(ca, cb);
}

}  // namespace

ObjectRef parse_object_ref(const std::string& text) {
  const auto open = text.rfind('(');
  if (open == std::string::npos || open == 0 || text.back() != ')') {
    throw InputError("expected name(id), got '" + text + "'");
  }
  const std::string digits = text.substr(open + 1, text.size() - open - 2);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) ||
      (digits.size() > 1 && digits[0] == '0') || digits.size() > 9) {
    throw InputError("bad object id in '" + text + "'");
  }
  return {text.substr(0, open), std::stoi(digits)};
}

const ObjectInstance* Room::find(const ObjectRef& ref) const {
  for (const auto& o : objects) {
    if (o.name == ref.name && o.id == ref.id) return &o;
  }
  return nullptr;
}

std::vector<ObjectRef> Room::nested_children(const ObjectRef& parent) const {
  std::vector<ObjectRef> out;
  for (const auto& o : objects) {
    if (o.nested_in && *o.nested_in == parent) out.push_back(o.ref());
  }
  return out;
}

const Room* Scene::find_room(int id) const {
  auto it = rooms.find(id);
  return it == rooms.end() ? nullptr : &it->second;
}

void check_scene(const Scene& scene) {
  for (const auto& [id, room] : scene.rooms) {
    const std::string where = "room " + std::to_string(id);
    if (room.id != id) throw InputError(where + ": id does not match its key");
    if (!room.aabb.valid()) throw InputError(where + ": invalid aabb");

    std::set<ObjectRef> seen;
    for (const auto& o : room.objects) {
      const std::string what = where + " object " + o.ref().str();
      if (o.name.empty()) throw InputError(where + ": object with empty name");
      if (o.id < 0) throw InputError(what + ": negative id");
      if (!seen.insert(o.ref()).second) throw InputError(what + ": duplicate (name, id)");
      if (!o.aabb.valid()) throw InputError(what + ": invalid aabb");
      if (o.home_room != id) throw InputError(what + ": home room mismatch");
      if (!room.aabb.contains(o.aabb.center(), kRoomContainmentEps)) {
        throw InputError(what + ": center lies outside the room");
      }
    }

    // Ids must already follow the nearest-to-origin numbering.
    std::map<std::string, std::vector<const ObjectInstance*>> by_name;
    for (const auto& o : room.objects) by_name[o.name].push_back(&o);
    for (auto& [name, group] : by_name) {
      std::sort(group.begin(), group.end(), [](const ObjectInstance* a, const ObjectInstance* b) {
        if (instance_before(*a, *b)) return true;
        if (instance_before(*b, *a)) return false;
        return a->id < b->id;
      });
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (group[i]->id != static_cast<int>(i)) {
          throw InputError(where + ": ids of '" + name +
                           "' are not ordered by distance to the origin");
        }
      }
    }

    for (const auto& o : room.objects) {
      // Walk the containment chain; more steps than objects means a cycle.
      const ObjectInstance* cur = &o;
      std::size_t hops = 0;
      while (cur->nested_in) {
        const ObjectInstance* parent = room.find(*cur->nested_in);
        if (!parent) {
          throw InputError(where + " object " + cur->ref().str() + ": nested_in " +
                           cur->nested_in->str() + " not found in room");
        }
        if (++hops > room.objects.size()) {
          throw InputError(where + " object " + o.ref().str() + ": nesting cycle");
        }
        cur = parent;
      }
    }
  }
}

std::vector<double> collect_floor_elevations(const LabeledSurfaces& surfaces) {
  std::vector<double> lows;
  for (const auto& room : surfaces.rooms) {
    if (!room.floor) continue;
    check_points(*room.floor, "room " + std::to_string(room.id) + " floor");
    double low = std::numeric_limits<double>::infinity();
    for (const auto& p : *room.floor) low = std::min(low, p.y);
    lows.push_back(low);
  }
  std::sort(lows.begin(), lows.end());
  std::vector<double> merged;
  for (double v : lows) {
    if (merged.empty() || v - merged.back() > kFloorElevationMergeTol) merged.push_back(v);
  }
  return merged;
}

std::optional<Aabb> build_room_aabb(const RoomSurfaces& room,
                                    const std::vector<double>& floor_elevations) {
  if (!room.floor && !room.ceiling) return std::nullopt;

  const std::string where = "room " + std::to_string(room.id);
  if (room.floor) check_points(*room.floor, where + " floor");
  if (room.ceiling) check_points(*room.ceiling, where + " ceiling");

  constexpr double inf = std::numeric_limits<double>::infinity();
  Aabb box{{inf, inf, inf}, {-inf, -inf, -inf}};
  auto absorb = [&box](const std::vector<Vec3>& pts) {
    for (const auto& p : pts) {
      box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
      box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
    }
  };
  if (room.floor) absorb(*room.floor);
  if (room.ceiling) absorb(*room.ceiling);

  if (room.floor && room.ceiling) {
    double floor_low = inf;
    for (const auto& p : *room.floor) floor_low = std::min(floor_low, p.y);
    double ceiling_high = -inf;
    for (const auto& p : *room.ceiling) ceiling_high = std::max(ceiling_high, p.y);
    box.min.y = floor_low;
    box.max.y = ceiling_high;
  } else if (room.ceiling) {
    // Highest scene-wide floor elevation strictly below the ceiling top. When
    // no elevation qualifies, the ceiling cloud's own bottom stands in.
    const double ceiling_high = box.max.y;
    auto it = std::lower_bound(floor_elevations.begin(), floor_elevations.end(), ceiling_high);
    if (it != floor_elevations.begin()) box.min.y = *std::prev(it);
  }
  // Floor only: the envelope of the floor cloud already gives max-y.
  return box;
}

Aabb build_object_aabb(const std::vector<Vec3>& vertices) {
  check_points(vertices, "object vertices");
  Aabb box{vertices.front(), vertices.front()};
  for (const auto& p : vertices) {
    box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
    box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
  }
  return box;
}

Room assign_instance_ids(Room room) {
  auto& objs = room.objects;
  std::stable_sort(objs.begin(), objs.end(), [](const ObjectInstance& a, const ObjectInstance& b) {
    if (a.name != b.name) return a.name < b.name;
    return instance_before(a, b);
  });

  // Old ref -> new id, only meaningful when old refs were unique.
  std::map<ObjectRef, int> remap;
  bool old_unique = true;
  for (std::size_t i = 0; i < objs.size();) {
    std::size_t j = i;
    while (j < objs.size() && objs[j].name == objs[i].name) ++j;
    for (std::size_t k = i; k < j; ++k) {
      const int fresh = static_cast<int>(k - i);
      if (!remap.emplace(objs[k].ref(), fresh).second) old_unique = false;
      objs[k].id = fresh;
    }
    i = j;
  }

  for (auto& o : objs) {
    if (!o.nested_in) continue;
    if (!old_unique) {
      throw InputError("room " + std::to_string(room.id) +
                       ": cannot remap nesting links over duplicate instance ids");
    }
    auto it = remap.find(*o.nested_in);
    if (it != remap.end()) o.nested_in->id = it->second;
  }
  return room;
}

SceneBuild build_scene(const LabeledSurfaces& surfaces) {
  SceneBuild out;
  out.scene.global_floor_elevations = collect_floor_elevations(surfaces);

  std::set<int> ids;
  for (const auto& rs : surfaces.rooms) {
    if (!ids.insert(rs.id).second) {
      throw InputError("duplicate room id " + std::to_string(rs.id) + " in surfaces");
    }
    auto box = build_room_aabb(rs, out.scene.global_floor_elevations);
    if (!box) {
      out.discarded_rooms.push_back(rs.id);
      continue;
    }
    Room room;
    room.id = rs.id;
    room.aabb = *box;
    for (const auto& ov : rs.objects) {
      if (ov.name.empty()) throw InputError("room " + std::to_string(rs.id) + ": unnamed object");
      ObjectInstance inst;
      inst.name = ov.name;
      inst.aabb = build_object_aabb(ov.vertices);
      inst.home_room = rs.id;
      inst.movable = ov.movable;
      room.objects.push_back(std::move(inst));
    }
    out.scene.rooms.emplace(rs.id, assign_instance_ids(std::move(room)));
  }
  check_scene(out.scene);
  return out;
}

}  // namespace memsim
