#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "memsim/action.hpp"
#include "memsim/scene.hpp"

namespace memsim {

// Scene-wide object identity: the room-scoped ref plus the room it started in.
struct ObjectKey {
  ObjectRef ref;
  int origin = 0;

  auto operator<=>(const ObjectKey&) const = default;
  bool operator==(const ObjectKey&) const = default;
  std::string str() const { return ref.str() + "@room(" + std::to_string(origin) + ")"; }
};

struct PlacedObject {
  ObjectKey key;
  Aabb aabb;
  // What the object rests on; nullopt is the floor. When `nested` is set the
  // support is the containing object and the object travels with it.
  std::optional<ObjectKey> support;
  bool nested = false;

  bool operator==(const PlacedObject&) const = default;
};

struct SimState {
  int agent_room = 0;
  // Empty, or the held object followed by its nested descendants.
  std::vector<PlacedObject> hand;
  // Every scene room has an entry; each list is sorted by key.
  std::map<int, std::vector<PlacedObject>> room_contents;
  std::set<int> visited;
  // Number of actions applied (invalid steps are not applied).
  std::size_t step_index = 0;
  // Position in the trajectory's explore_order annotation.
  std::size_t explore_cursor = 0;

  bool hand_empty() const { return hand.empty(); }
  std::optional<ObjectKey> held() const {
    return hand.empty() ? std::nullopt : std::optional<ObjectKey>(hand.front().key);
  }
  bool operator==(const SimState&) const = default;
};

enum class StepError {
  None,
  WrongRoomPick,
  WrongRoomPut,
  NoSuchRoom,
  AllRoomsExplored,
  ObjectAbsent,
  NotHolding,
  HandOccupied,
  RoomNotVisited,
};

const char* to_string(StepError e);
StepError step_error_from_string(const std::string& s);

struct StepVerdict {
  std::size_t index = 0;
  bool valid = true;
  StepError error_kind = StepError::None;
  // Non-fatal remark, e.g. a GO TO ROOM into the room the agent is already in.
  std::string warning;

  bool operator==(const StepVerdict&) const = default;
};

struct ValidationReport {
  std::vector<StepVerdict> verdicts;
  bool trajectory_valid = false;
  SimState final_state;

  bool operator==(const ValidationReport&) const = default;
};

// Throws InputError ("NoSuchRoom ...") when the start room is not in the scene.
SimState init(const Scene& scene, int start_room);

struct StepOutcome {
  SimState state;
  StepVerdict verdict;
};

// Applies one action. Invalid actions return the input state unchanged.
// `explore_order` supplies GoToNewRoom destinations (see Trajectory).
StepOutcome step(const Scene& scene, const SimState& state, const Action& action,
                 std::span<const int> explore_order = {});

// Folds `step` over the whole trajectory. Never stops early; the trajectory is
// valid iff every step is valid and the hand ends empty.
ValidationReport validate(const Scene& scene, const Trajectory& traj, int start_room);

// Where an object is: a room (or the hand when `room` is empty) and its support.
struct Placement {
  ObjectKey object;
  std::optional<int> room;
  std::optional<ObjectKey> support;

  auto operator<=>(const Placement&) const = default;
  bool operator==(const Placement&) const = default;
};

struct PlacementDiff {
  std::vector<Placement> removed;  // in `a`, not in `b`
  std::vector<Placement> added;    // in `b`, not in `a`

  bool empty() const { return removed.empty() && added.empty(); }
  bool operator==(const PlacementDiff&) const = default;
};

std::vector<Placement> placements(const SimState& state);

// Symmetric difference of placements, sorted. Throws InputError when the two
// states do not describe the same rooms and objects.
PlacementDiff world_diff(const SimState& a, const SimState& b);

}  // namespace memsim
