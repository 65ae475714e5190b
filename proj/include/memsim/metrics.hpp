#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memsim/action.hpp"
#include "memsim/scene.hpp"
#include "memsim/sim.hpp"

namespace memsim {

enum class SubGoalKind { PickUp, PutDown };

// One gold interaction token. For put-downs, `target` and `room` are set.
struct SubGoal {
  SubGoalKind kind = SubGoalKind::PickUp;
  ObjectKey object;
  std::optional<Support> target;
  std::optional<int> room;

  bool operator==(const SubGoal&) const = default;
};

// Throws InputError when the gold trajectory does not validate on the scene.
std::vector<SubGoal> extract_subgoals(const Scene& scene, const Trajectory& gold, int start_room);

struct TaskScore {
  int sr = 0;
  double sub_sr = 0.0;
  std::vector<std::size_t> achieved;  // indices into the gold sub-goal list
  std::size_t total_subgoals = 0;
  bool trajectory_valid = false;
  bool final_state_matches = false;
};

// Simulates the prediction and matches its valid interaction steps against the
// gold sub-goals as an ordered subsequence. SR additionally needs a valid
// trajectory and a final world identical to gold's.
TaskScore score(const Scene& scene, const Trajectory& gold, const Trajectory& predicted,
                int start_room);

enum class Tier { Simple, Medium, Hard };

const char* to_string(Tier t);
Tier tier_from_string(const std::string& s);

struct TierRow {
  std::string name;  // "simple" | "medium" | "hard" | "overall"
  std::size_t tasks = 0;
  double sr_percent = 0.0;
  double sub_sr_percent = 0.0;
};

struct SuiteReport {
  std::vector<TaskScore> tasks;
  std::vector<Tier> tiers;
  std::vector<TierRow> rows;  // tiers present, in simple/medium/hard order, then overall
};

SuiteReport aggregate(const std::vector<TaskScore>& scores, const std::vector<Tier>& tiers);

// Fixed-width text table, percentages with one decimal.
std::string format_report_table(const SuiteReport& report);

}  // namespace memsim
