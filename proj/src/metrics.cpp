#include "memsim/metrics.hpp"

#include <cstdio>

#include "memsim/error.hpp"

namespace memsim {

namespace {

std::optional<SubGoal> as_subgoal(const Action& a) {
  if (const auto* p = std::get_if<PickUp>(&a)) {
    return SubGoal{SubGoalKind::PickUp, {p->object, p->origin_room}, std::nullopt, std::nullopt};
  }
  if (const auto* p = std::get_if<PutDown>(&a)) {
    return SubGoal{SubGoalKind::PutDown, {p->object, p->origin_room}, p->target, p->room};
  }
  return std::nullopt;
}

}  // namespace

std::vector<SubGoal> extract_subgoals(const Scene& scene, const Trajectory& gold, int start_room) {
  const ValidationReport report = validate(scene, gold, start_room);
  if (!report.trajectory_valid) {
    for (const auto& v : report.verdicts) {
      if (!v.valid) {
        throw InputError("gold trajectory is invalid at step " + std::to_string(v.index) + " (" +
                         to_string(v.error_kind) + ")");
      }
    }
    throw InputError("gold trajectory ends holding an object");
  }
  std::vector<SubGoal> goals;
  for (const auto& a : gold.steps) {
    if (auto g = as_subgoal(a)) goals.push_back(std::move(*g));
  }
  return goals;
}

TaskScore score(const Scene& scene, const Trajectory& gold, const Trajectory& predicted,
                int start_room) {
  const auto goals = extract_subgoals(scene, gold, start_room);
  const ValidationReport gold_run = validate(scene, gold, start_room);
  const ValidationReport pred_run = validate(scene, predicted, start_room);

  TaskScore s;
  s.total_subgoals = goals.size();
  s.trajectory_valid = pred_run.trajectory_valid;
  std::size_t next = 0;
  for (std::size_t i = 0; i < predicted.steps.size() && next < goals.size(); ++i) {
    if (!pred_run.verdicts[i].valid) continue;
    const auto g = as_subgoal(predicted.steps[i]);
    if (g && *g == goals[next]) s.achieved.push_back(next++);
  }
  s.sub_sr = goals.empty() ? 1.0
                           : static_cast<double>(s.achieved.size()) / static_cast<double>(goals.size());
  s.final_state_matches = world_diff(pred_run.final_state, gold_run.final_state).empty();
  s.sr = (s.trajectory_valid && s.achieved.size() == goals.size() && s.final_state_matches) ? 1 : 0;
  return s;
}

const char* to_string(Tier t) {
  switch (t) {
    case Tier::Simple: return "simple";
    case Tier::Medium: return "medium";
    case Tier::Hard: return "hard";
  }
  return "?";
}

Tier tier_from_string(const std::string& s) {
  if (s == "simple") return Tier::Simple;
  if (s == "medium") return Tier::Medium;
  if (s == "hard") return Tier::Hard;
  throw InputError("unknown tier '" + s + "' (expected simple|medium|hard)");
}

SuiteReport aggregate(const std::vector<TaskScore>& scores, const std::vector<Tier>& tiers) {
  if (scores.empty()) throw InputError("aggregate: no task scores");
  if (scores.size() != tiers.size()) throw InputError("aggregate: one tier per task required");

  SuiteReport r{scores, tiers, {}};
  auto row_for = [&](const std::string& name, auto&& include) {
    TierRow row{name, 0, 0.0, 0.0};
    double sr = 0.0;
    double sub = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!include(tiers[i])) continue;
      ++row.tasks;
      sr += scores[i].sr;
      sub += scores[i].sub_sr;
    }
    if (row.tasks) {
      row.sr_percent = 100.0 * sr / static_cast<double>(row.tasks);
      row.sub_sr_percent = 100.0 * sub / static_cast<double>(row.tasks);
    }
    return row;
  };
  for (Tier t : {Tier::Simple, Tier::Medium, Tier::Hard}) {
    TierRow row = row_for(to_string(t), [t](Tier x) { return x == t; });
    if (row.tasks) r.rows.push_back(std::move(row));
  }
  r.rows.push_back(row_for("overall", [](Tier) { return true; }));
  return r;
}

std::string format_report_table(const SuiteReport& report) {
  std::string out;
  char line[96];
  std::snprintf(line, sizeof line, "%-8s %6s %7s %7s\n", "tier", "tasks", "SR", "Sub-SR");
  out += line;
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof line, "%-8s %6zu %7.1f %7.1f\n", row.name.c_str(), row.tasks,
                  row.sr_percent, row.sub_sr_percent);
    out += line;
  }
  return out;
}

}  // namespace memsim
