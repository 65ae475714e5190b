#include "memsim/sim.hpp"

#include <algorithm>

#include "memsim/error.hpp"

namespace memsim {

const char* to_string(StepError e) {
  switch (e) {
    case StepError::None: return "none";
    case StepError::WrongRoomPick: return "WrongRoomPick";
    case StepError::WrongRoomPut: return "WrongRoomPut";
    case StepError::NoSuchRoom: return "NoSuchRoom";
    case StepError::AllRoomsExplored: return "AllRoomsExplored";
    case StepError::ObjectAbsent: return "ObjectAbsent";
    case StepError::NotHolding: return "NotHolding";
    case StepError::HandOccupied: return "HandOccupied";
    case StepError::RoomNotVisited: return "RoomNotVisited";
  }
  return "?";
}

StepError step_error_from_string(const std::string& s) {
  for (auto e : {StepError::None, StepError::WrongRoomPick, StepError::WrongRoomPut,
                 StepError::NoSuchRoom, StepError::AllRoomsExplored, StepError::ObjectAbsent,
                 StepError::NotHolding, StepError::HandOccupied, StepError::RoomNotVisited}) {
    if (s == to_string(e)) return e;
  }
  throw InputError("unknown error_kind '" + s + "'");
}

namespace {

bool by_key(const PlacedObject& a, const PlacedObject& b) { return a.key < b.key; }

std::vector<PlacedObject>::iterator find_key(std::vector<PlacedObject>& v, const ObjectKey& k) {
  return std::find_if(v.begin(), v.end(), [&](const PlacedObject& p) { return p.key == k; });
}

// Target lookup by room-scoped ref: prefer the room's own instance, otherwise
// the visiting instance with the lowest origin.
const PlacedObject* find_support(const std::vector<PlacedObject>& contents, const ObjectRef& ref,
                                 int room) {
  const PlacedObject* best = nullptr;
  for (const auto& p : contents) {
    if (p.key.ref != ref) continue;
    if (p.key.origin == room) return &p;
    if (!best || p.key.origin < best->key.origin) best = &p;
  }
  return best;
}

StepOutcome reject(const SimState& state, StepError e) {
  return {state, StepVerdict{0, false, e, {}}};
}

struct Stepper {
  const Scene& scene;
  const SimState& in;
  std::span<const int> explore_order;

  StepOutcome operator()(const Thought&) const { return accept(in); }

  StepOutcome operator()(const GoToRoom& a) const {
    if (!scene.find_room(a.room)) return reject(in, StepError::NoSuchRoom);
    if (!in.visited.contains(a.room)) return reject(in, StepError::RoomNotVisited);
    SimState out = in;
    StepVerdict v;
    if (out.agent_room == a.room) v.warning = "already in room " + std::to_string(a.room);
    out.agent_room = a.room;
    ++out.step_index;
    return {std::move(out), v};
  }

  StepOutcome operator()(const GoToNewRoom&) const {
    std::optional<int> dest;
    std::size_t cursor = in.explore_cursor;
    if (cursor < explore_order.size()) {
      dest = explore_order[cursor++];
      if (in.visited.contains(*dest)) dest.reset();
    }
    if (!dest) {
      for (const auto& [id, room] : scene.rooms) {
        if (!in.visited.contains(id)) {
          dest = id;
          break;
        }
      }
    }
    if (!dest) return reject(in, StepError::AllRoomsExplored);
    SimState out = in;
    out.agent_room = *dest;
    out.visited.insert(*dest);
    out.explore_cursor = cursor;
    return accept(std::move(out));
  }

  StepOutcome operator()(const PickUp& a) const {
    if (!in.hand_empty()) return reject(in, StepError::HandOccupied);
    if (a.current_room != in.agent_room) return reject(in, StepError::WrongRoomPick);

    const ObjectKey key{a.object, a.origin_room};
    SimState out = in;
    auto& contents = out.room_contents.at(in.agent_room);
    auto it = find_key(contents, key);
    if (it == contents.end()) return reject(in, StepError::ObjectAbsent);

    PlacedObject top = *it;
    top.support.reset();
    top.nested = false;
    out.hand.push_back(top);
    contents.erase(it);

    // Pull nested descendants along, breadth-first from the picked object.
    for (std::size_t i = 0; i < out.hand.size(); ++i) {
      const ObjectKey parent = out.hand[i].key;
      for (auto c = contents.begin(); c != contents.end();) {
        if (c->nested && c->support == parent) {
          out.hand.push_back(*c);
          c = contents.erase(c);
        } else {
          ++c;
        }
      }
    }
    return accept(std::move(out));
  }

  StepOutcome operator()(const PutDown& a) const {
    if (in.hand_empty()) return reject(in, StepError::NotHolding);
    if (a.room != in.agent_room) return reject(in, StepError::WrongRoomPut);
    const ObjectKey key{a.object, a.origin_room};
    if (in.hand.front().key != key) return reject(in, StepError::NotHolding);

    const Room& room = scene.rooms.at(in.agent_room);
    const auto& contents = in.room_contents.at(in.agent_room);

    std::optional<ObjectKey> support;
    Vec3 anchor{room.aabb.center().x, room.aabb.min.y, room.aabb.center().z};
    if (a.target.object) {
      const PlacedObject* target = find_support(contents, *a.target.object, in.agent_room);
      if (!target) return reject(in, StepError::ObjectAbsent);
      support = target->key;
      anchor = {target->aabb.center().x, target->aabb.max.y, target->aabb.center().z};
    }

    SimState out = in;
    // Stack on the support's top face, centered horizontally.
    const Aabb& box = out.hand.front().aabb;
    const Vec3 offset{anchor.x - box.center().x, anchor.y - box.min.y, anchor.z - box.center().z};
    out.hand.front().support = support;
    auto& dst = out.room_contents.at(in.agent_room);
    for (auto& p : out.hand) {
      p.aabb = p.aabb.translated(offset);
      dst.push_back(std::move(p));
    }
    out.hand.clear();
    std::sort(dst.begin(), dst.end(), by_key);
    return accept(std::move(out));
  }

  static StepOutcome accept(SimState out) {
    ++out.step_index;
    return {std::move(out), StepVerdict{}};
  }
};

}  // namespace

SimState init(const Scene& scene, int start_room) {
  if (!scene.find_room(start_room)) {
    throw InputError("NoSuchRoom: start room " + std::to_string(start_room) + " is not in the scene");
  }
  SimState s;
  s.agent_room = start_room;
  s.visited.insert(start_room);
  for (const auto& [id, room] : scene.rooms) {
    auto& contents = s.room_contents[id];
    for (const auto& o : room.objects) {
      PlacedObject p;
      p.key = {o.ref(), id};
      p.aabb = o.aabb;
      if (o.nested_in) {
        p.support = ObjectKey{*o.nested_in, id};
        p.nested = true;
      }
      contents.push_back(std::move(p));
    }
    std::sort(contents.begin(), contents.end(), by_key);
  }
  return s;
}

StepOutcome step(const Scene& scene, const SimState& state, const Action& action,
                 std::span<const int> explore_order) {
  StepOutcome out = std::visit(Stepper{scene, state, explore_order}, action);
  out.verdict.index = state.step_index;
  return out;
}

ValidationReport validate(const Scene& scene, const Trajectory& traj, int start_room) {
  std::set<int> annotated;
  for (int r : traj.explore_order) {
    if (!scene.find_room(r)) {
      throw InputError("explore_order names room " + std::to_string(r) + " which is not in the scene");
    }
    if (r == start_room || !annotated.insert(r).second) {
      throw InputError("explore_order must list distinct rooms other than the start room");
    }
  }

  ValidationReport report;
  SimState state = init(scene, start_room);
  report.verdicts.reserve(traj.steps.size());
  bool all_valid = true;
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    StepOutcome o = step(scene, state, traj.steps[i], traj.explore_order);
    o.verdict.index = i;
    all_valid = all_valid && o.verdict.valid;
    report.verdicts.push_back(std::move(o.verdict));
    state = std::move(o.state);
  }
  report.trajectory_valid = all_valid && state.hand_empty();
  report.final_state = std::move(state);
  return report;
}

std::vector<Placement> placements(const SimState& state) {
  std::vector<Placement> out;
  for (const auto& [id, contents] : state.room_contents) {
    for (const auto& p : contents) out.push_back({p.key, id, p.support});
  }
  for (const auto& p : state.hand) out.push_back({p.key, std::nullopt, p.support});
  std::sort(out.begin(), out.end());
  return out;
}

PlacementDiff world_diff(const SimState& a, const SimState& b) {
  auto rooms_of = [](const SimState& s) {
    std::vector<int> ids;
    for (const auto& [id, _] : s.room_contents) ids.push_back(id);
    return ids;
  };
  if (rooms_of(a) != rooms_of(b)) throw InputError("world_diff: states cover different rooms");

  const auto pa = placements(a);
  const auto pb = placements(b);
  auto keys = [](const std::vector<Placement>& ps) {
    std::vector<ObjectKey> ks;
    for (const auto& p : ps) ks.push_back(p.object);
    std::sort(ks.begin(), ks.end());
    return ks;
  };
  if (keys(pa) != keys(pb)) throw InputError("world_diff: states hold different objects");

  PlacementDiff d;
  std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(d.removed));
  std::set_difference(pb.begin(), pb.end(), pa.begin(), pa.end(), std::back_inserter(d.added));
  return d;
}

}  // namespace memsim
