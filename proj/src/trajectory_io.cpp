#include "memsim/trajectory_io.hpp"

#include "memsim/error.hpp"
#include "memsim/json_util.hpp"

namespace memsim {

using nlohmann::json;

Trajectory trajectory_from_json(const json& doc) {
  Trajectory traj;
  const auto& task = require(doc, "task");
  if (!task.is_string()) throw InputError("'task' must be a string");
  traj.task = task.get<std::string>();

  const auto& steps = require(doc, "steps");
  if (!steps.is_array()) throw InputError("'steps' must be an array");
  if (steps.empty()) throw InputError("trajectory has no steps");
  traj.steps.reserve(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].is_string()) {
      throw InputError("step " + std::to_string(i) + ": expected a string");
    }
    try {
      traj.steps.push_back(parse_step(steps[i].get<std::string>()));
    } catch (const ParseError& e) {
      throw TrajectoryParseError(i, e);
    }
  }

  if (doc.contains("explore_order")) {
    const auto& order = doc.at("explore_order");
    if (!order.is_array()) throw InputError("'explore_order' must be an array");
    for (const auto& r : order) {
      if (!r.is_number_integer()) throw InputError("'explore_order' entries must be integers");
      traj.explore_order.push_back(r.get<int>());
    }
  }
  return traj;
}

json trajectory_to_json(const Trajectory& traj) {
  json steps = json::array();
  for (const auto& a : traj.steps) steps.push_back(serialize_step(a));
  json doc = {{"task", traj.task}, {"steps", std::move(steps)}};
  if (!traj.explore_order.empty()) doc["explore_order"] = traj.explore_order;
  return doc;
}

Trajectory load_trajectory(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    return trajectory_from_json(doc);
  } catch (const TrajectoryParseError& e) {
    throw e.with_context(path);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace memsim
