#pragma once

#include <string>
#include <vector>

#include "memsim/action.hpp"
#include "memsim/memory.hpp"
#include "memsim/scene.hpp"
#include "memsim/scene_io.hpp"
#include "memsim/trajectory_io.hpp"

namespace memsim::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(MEMSIM_FIXTURE_DIR) + "/" + name;
}

struct Fixture {
  std::string name;
  Scene scene;
  Trajectory trajectory;
  int start_room = 0;
};

inline Fixture desk_fixture() {
  return {"desk", load_scene(fixture_path("desk_scene.json")),
          load_trajectory(fixture_path("desk_trajectory.json")), 10};
}

inline Fixture cooking_fixture() {
  return {"cooking", load_scene(fixture_path("cooking_scene.json")),
          load_trajectory(fixture_path("cooking_trajectory.json")), 4};
}

inline std::vector<Fixture> all_fixtures() { return {desk_fixture(), cooking_fixture()}; }

inline Trajectory parse_lines(const std::vector<std::string>& lines,
                              std::vector<int> explore_order = {}) {
  Trajectory t;
  t.task = "test";
  for (const auto& l : lines) t.steps.push_back(parse_step(l));
  t.explore_order = std::move(explore_order);
  return t;
}

inline Aabb box(Vec3 lo, Vec3 hi) { return {lo, hi}; }

// Small two-room scene used by the simulator and metric tests.
//   room 1: table(0), cup(0) on the table, basket(0) with apple(0) nested inside
//   room 2: shelf(0), book(0)
//   room 3: empty
inline Scene small_scene() {
  Scene s;
  Room r1{1, box({0, 0, 0}, {5, 3, 5}), {}};
  r1.objects = {
      {"apple", 0, box({3.1, 0.55, 3.1}, {3.3, 0.65, 3.3}), 1, true, ObjectRef{"basket", 0}},
      {"basket", 0, box({3, 0.5, 3}, {3.5, 0.8, 3.5}), 1, true, std::nullopt},
      {"cup", 0, box({1.1, 0.8, 1.1}, {1.2, 0.9, 1.2}), 1, true, std::nullopt},
      {"table", 0, box({1, 0, 1}, {2, 0.8, 2}), 1, false, std::nullopt},
  };
  Room r2{2, box({10, 0, 0}, {15, 3, 5}), {}};
  r2.objects = {
      {"book", 0, box({11.1, 1.0, 1.1}, {11.3, 1.05, 1.3}), 2, true, std::nullopt},
      {"shelf", 0, box({11, 0, 1}, {12, 1.0, 1.5}), 2, false, std::nullopt},
  };
  Room r3{3, box({20, 0, 0}, {25, 3, 5}), {}};
  s.rooms = {{1, r1}, {2, r2}, {3, r3}};
  s.global_floor_elevations = {0.0};
  check_scene(s);
  return s;
}

// Small fusion dims used by oracle and gradient tests.
inline FusionConfig small_config(std::size_t n, std::size_t m, std::size_t d = 12,
                                 std::size_t hidden = 6) {
  FusionConfig c;
  c.model_dim = d;
  c.memory_dim = m;
  c.hidden_dim = hidden;
  c.tokens = n;
  c.views = 1;
  c.patch_size = 4;
  return c;
}

}  // namespace memsim::testing
