#pragma once

#include <string>

#include <json.hpp>

#include "memsim/action.hpp"

namespace memsim {

// Trajectory file: {"task": str, "steps": [str, ...], "explore_order"?: [int, ...]}.
// Step parse failures are rethrown as TrajectoryParseError with the 0-based index.
Trajectory trajectory_from_json(const nlohmann::json& doc);
nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory load_trajectory(const std::string& path);

}  // namespace memsim
