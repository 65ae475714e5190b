#include "memsim/sim_io.hpp"

#include "memsim/error.hpp"
#include "memsim/json_util.hpp"
#include "memsim/scene_io.hpp"

namespace memsim {

using nlohmann::json;

json object_key_to_json(const ObjectKey& key) {
  return {{"object", key.ref.str()}, {"origin", key.origin}};
}

ObjectKey object_key_from_json(const json& j) {
  return {parse_object_ref(require(j, "object").get<std::string>()), require_int(j, "origin")};
}

namespace {

json placed_to_json(const PlacedObject& p) {
  json j = object_key_to_json(p.key);
  j["aabb"] = aabb_to_json(p.aabb);
  j["support"] = p.support ? object_key_to_json(*p.support) : json("floor");
  j["nested"] = p.nested;
  return j;
}

PlacedObject placed_from_json(const json& j) {
  PlacedObject p;
  p.key = object_key_from_json(j);
  p.aabb = aabb_from_json(require(j, "aabb"));
  const auto& support = require(j, "support");
  if (!support.is_string()) p.support = object_key_from_json(support);
  p.nested = require(j, "nested").get<bool>();
  return p;
}

json placed_list(const std::vector<PlacedObject>& v) {
  json arr = json::array();
  for (const auto& p : v) arr.push_back(placed_to_json(p));
  return arr;
}

std::vector<PlacedObject> placed_list_from_json(const json& arr) {
  std::vector<PlacedObject> v;
  for (const auto& p : arr) v.push_back(placed_from_json(p));
  return v;
}

}  // namespace

json state_to_json(const SimState& state) {
  json rooms = json::array();
  for (const auto& [id, contents] : state.room_contents) {
    rooms.push_back({{"room", id}, {"objects", placed_list(contents)}});
  }
  return {{"agent_room", state.agent_room},
          {"hand", placed_list(state.hand)},
          {"rooms", std::move(rooms)},
          {"visited", json(std::vector<int>(state.visited.begin(), state.visited.end()))},
          {"step_index", state.step_index},
          {"explore_cursor", state.explore_cursor}};
}

SimState state_from_json(const json& j) {
  try {
    SimState s;
    s.agent_room = require_int(j, "agent_room");
    s.hand = placed_list_from_json(require(j, "hand"));
    for (const auto& r : require(j, "rooms")) {
      s.room_contents[require_int(r, "room")] = placed_list_from_json(require(r, "objects"));
    }
    for (const auto& v : require(j, "visited")) s.visited.insert(v.get<int>());
    s.step_index = require(j, "step_index").get<std::size_t>();
    s.explore_cursor = require(j, "explore_cursor").get<std::size_t>();
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("final_state: ") + e.what());
  }
}

json report_to_json(const ValidationReport& report) {
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    json vj = {{"index", v.index}, {"valid", v.valid}, {"error_kind", to_string(v.error_kind)}};
    if (!v.warning.empty()) vj["warning"] = v.warning;
    verdicts.push_back(std::move(vj));
  }
  return {{"valid", report.trajectory_valid},
          {"verdicts", std::move(verdicts)},
          {"final_state", state_to_json(report.final_state)}};
}

ValidationReport report_from_json(const json& j) {
  ValidationReport r;
  try {
    r.trajectory_valid = require(j, "valid").get<bool>();
    for (const auto& vj : require(j, "verdicts")) {
      StepVerdict v;
      v.index = require(vj, "index").get<std::size_t>();
      v.valid = require(vj, "valid").get<bool>();
      v.error_kind = step_error_from_string(require(vj, "error_kind").get<std::string>());
      v.warning = vj.value("warning", std::string{});
      r.verdicts.push_back(std::move(v));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  r.final_state = state_from_json(require(j, "final_state"));
  return r;
}

json diff_to_json(const PlacementDiff& diff) {
  auto list = [](const std::vector<Placement>& ps) {
    json arr = json::array();
    for (const auto& p : ps) {
      json j = object_key_to_json(p.object);
      j["room"] = p.room ? json(*p.room) : json("hand");
      j["support"] = p.support ? object_key_to_json(*p.support) : json("floor");
      arr.push_back(std::move(j));
    }
    return arr;
  };
  return {{"removed", list(diff.removed)}, {"added", list(diff.added)}};
}

}  // namespace memsim
