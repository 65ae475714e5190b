#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "memsim/object_ref.hpp"

namespace memsim {

// Surface an object is put down on: another object or the room floor.
struct Support {
  std::optional<ObjectRef> object;  // nullopt: the floor

  static Support floor() { return {}; }
  static Support on(ObjectRef ref) { return {std::move(ref)}; }
  bool is_floor() const { return !object.has_value(); }
  std::string str() const { return object ? object->str() : "floor"; }

  auto operator<=>(const Support&) const = default;
  bool operator==(const Support&) const = default;
};

struct GoToRoom {
  int room = 0;
  bool operator==(const GoToRoom&) const = default;
};

struct GoToNewRoom {
  bool operator==(const GoToNewRoom&) const = default;
};

struct PickUp {
  ObjectRef object;
  int origin_room = 0;
  int current_room = 0;
  bool operator==(const PickUp&) const = default;
};

struct PutDown {
  ObjectRef object;
  int origin_room = 0;
  Support target;
  int room = 0;
  bool operator==(const PutDown&) const = default;
};

// Free-text line between tokens. Must not start (after leading whitespace)
// with '<' and must not contain line breaks.
struct Thought {
  std::string text;
  bool operator==(const Thought&) const = default;
};

using Action = std::variant<GoToRoom, GoToNewRoom, PickUp, PutDown, Thought>;

// Parses one line. Lines whose first non-blank character is '<' must be a
// complete token; everything else is a Thought kept verbatim.
// Throws ParseError.
Action parse_step(std::string_view line);

// Canonical single-space rendering; inverse of parse_step.
std::string serialize_step(const Action& action);

bool is_interaction(const Action& action);

// Characters accepted inside object names.
bool is_name_char(char c);

struct Trajectory {
  std::string task;
  std::vector<Action> steps;
  // Optional replay annotation: destinations taken by successive valid
  // GoToNewRoom steps. Once exhausted, the lowest-id unvisited room is used.
  std::vector<int> explore_order;

  bool operator==(const Trajectory&) const = default;
};

}  // namespace memsim
