// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "memsim/bank_io.hpp"
#include "memsim/cli.hpp"
#include "memsim/json_util.hpp"
#include "memsim/metrics.hpp"
#include "memsim/sim.hpp"
#include "oracle/attention_oracle.hpp"
#include "oracle/geometry_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace memsim;
using memsim::testing::fixture_path;
using memsim::testing::small_config;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first failure message; later ones are counted only.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  Outcome done(std::string detail) const {
    if (failures_ == 0) return {true, std::move(detail)};
    return {false, std::to_string(failures_) + " failure(s), first: " + first_};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome fixture_validation() {
  Check check;
  const auto start = Clock::now();
  std::size_t steps = 0;
  for (const auto& f : memsim::testing::all_fixtures()) {
    const ValidationReport r = validate(f.scene, f.trajectory, f.start_room);
    check.expect(r.trajectory_valid, f.name + " trajectory invalid");
    for (const auto& v : r.verdicts) {
      check.expect(v.valid, f.name + " step " + std::to_string(v.index) + " " + to_string(v.error_kind));
    }
    steps += r.verdicts.size();
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  return check.done(std::to_string(steps) + " steps valid in " + fmt(elapsed) + " s");
}

// --- 2 ---------------------------------------------------------------------

struct Mutation {
  std::string name;
  std::function<void(std::vector<std::string>&)> apply;
  StepError expected;
  std::size_t index;  // first invalid step; npos when only the end state fails
};

std::size_t find_step(const std::vector<std::string>& steps, const std::string& prefix, bool last) {
  std::size_t found = std::string::npos;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].rfind(prefix, 0) == 0) {
      found = i;
      if (!last) break;
    }
  }
  return found;
}

Outcome mutation_detection() {
  const auto f = memsim::testing::desk_fixture();
  const auto base = read_json_file(fixture_path("desk_trajectory.json"))["steps"].get<std::vector<std::string>>();
  const std::size_t last_put = find_step(base, "<PUT DOWN", true);
  const std::size_t first_box_pick = find_step(base, "<PICK UP box(0)", false);
  const std::size_t first_box_put = find_step(base, "<PUT DOWN box(0)", false);
  const std::size_t vase_pick = find_step(base, "<PICK UP flower vase(0) from room(8) in room(8)>", false);
  const std::size_t last_new_room = find_step(base, "<GO TO NEW ROOM>", true);
  const std::size_t npos = std::string::npos;

  const std::vector<Mutation> mutations = {
      {"delete final put-down", [&](auto& s) { s.erase(s.begin() + static_cast<long>(last_put)); },
       StepError::None, npos},
      {"double pick-up",
       [&](auto& s) { s.insert(s.begin() + static_cast<long>(first_box_pick) + 1, s[first_box_pick]); },
       StepError::HandOccupied, first_box_pick + 1},
      {"put-down with empty hand",
       [&](auto& s) { s.insert(s.begin() + static_cast<long>(first_box_put) + 1, s[first_box_put]); },
       StepError::NotHolding, first_box_put + 1},
      {"wrong current-room pick",
       [&](auto& s) { s[vase_pick] = "<PICK UP flower vase(0) from room(8) in room(10)>"; },
       StepError::WrongRoomPick, vase_pick},
      {"nonexistent room", [&](auto& s) { s.insert(s.begin() + 1, "<GO TO ROOM(77)>"); }, StepError::NoSuchRoom,
       1},
      {"go to new room after exhaustion",
       [&](auto& s) { s.insert(s.begin() + static_cast<long>(last_new_room) + 1, "<GO TO NEW ROOM>"); },
       StepError::AllRoomsExplored, last_new_room + 1},
      {"go to unvisited room", [&](auto& s) { s.insert(s.begin() + 1, "<GO TO ROOM(12)>"); },
       StepError::RoomNotVisited, 1},
      {"pick of absent object",
       [&](auto& s) { s.insert(s.begin() + 1, "<PICK UP lamp(3) from room(10) in room(10)>"); },
       StepError::ObjectAbsent, 1},
  };

  Check check;
  int detected = 0;
  for (const auto& m : mutations) {
    auto steps = base;
    m.apply(steps);
    const Trajectory t = memsim::testing::parse_lines(steps, f.trajectory.explore_order);
    const ValidationReport r = validate(f.scene, t, f.start_room);
    std::size_t first = npos;
    StepError kind = StepError::None;
    for (const auto& v : r.verdicts) {
      if (!v.valid) {
        first = v.index;
        kind = v.error_kind;
        break;
      }
    }
    const bool ok = !r.trajectory_valid && kind == m.expected && first == m.index &&
                    (m.expected != StepError::None || r.final_state.held().has_value());
    check.expect(ok, m.name + ": got " + to_string(kind) + " at " +
                         (first == npos ? std::string("end") : std::to_string(first)));
    detected += ok;
  }
  return check.done(std::to_string(detected) + "/" + std::to_string(mutations.size()) + " detected");
}

// --- 3 ---------------------------------------------------------------------

Outcome fusion_oracle() {
  Check check;
  const auto start = Clock::now();
  double worst = 0.0;
  SeededRng rng(3003);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 4);
    const std::size_t m = 2 * (1 + static_cast<std::size_t>((i / 4) % 4));
    const std::size_t entries = 1 + static_cast<std::size_t>(i % 3);
    FusionConfig c = small_config(n, m, 6 * (1 + static_cast<std::size_t>(i % 2)), 5);
    c.query_init = static_cast<QueryInit>((i / 3) % 3);
    c.time_embedding = i % 5 != 0;
    const ProjectionParams p = ProjectionParams::random(c, 7000 + static_cast<std::uint64_t>(i),
                                                        i % 7 == 0 ? Activation::Identity : Activation::Silu);
    const FusionInstance inst = random_instance(c, entries, rng);
    const Matrix got = fuse(inst.working, build_bank(inst, p, c), p, c).fused;
    const double err = (got - oracle::fuse(inst.working, inst.episodes, p, c)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    check.expect(err <= 1e-6, "instance " + std::to_string(i) + " error " + fmt(err));
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
  return check.done("max abs error " + fmt(worst) + " over 100 instances in " + fmt(elapsed) + " s");
}

// --- 4 ---------------------------------------------------------------------

Outcome gradient_verification() {
  Check check;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FusionConfig c = small_config(1 + seed % 4, 2 * (1 + seed % 4), 6 * (1 + seed % 2), 3 + seed % 4);
    c.query_init = static_cast<QueryInit>(seed % 3);
    c.time_embedding = seed % 4 != 3;
    const ProjectionParams p = ProjectionParams::random(c, 900 + seed);
    SeededRng rng(1900 + seed);
    const FusionInstance inst = random_instance(c, 1 + seed % 3, rng);
    const GradCheckResult g = grad_check(inst, p, c, 1e-5);
    worst = std::max(worst, g.max_rel_error);
    check.expect(g.max_rel_error <= 1e-4,
                 "seed " + std::to_string(seed) + " " + g.worst_group + " " + fmt(g.max_rel_error));
    check.expect(g.group_max_rel_error.size() == 10, "seed " + std::to_string(seed) + " missing groups");
  }
  return check.done("max relative error " + fmt(worst) + " over 20 instances, 10 groups each");
}

// --- 5 ---------------------------------------------------------------------

Outcome fusion_invariants() {
  Check check;
  SeededRng rng(5005);
  int differing = 0;
  double stochastic_worst = 0.0, translation_worst = 0.0, permutation_worst = 0.0;

  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 4);
    const std::size_t m = 2 * (1 + static_cast<std::size_t>(i % 4));
    const std::size_t entries = 2 + static_cast<std::size_t>(i % 2);
    FusionConfig c = small_config(n, m);
    const ProjectionParams p = ProjectionParams::random(c, 50000 + static_cast<std::uint64_t>(i));
    const FusionInstance inst = random_instance(c, entries, rng);
    const MemoryBank bank = build_bank(inst, p, c);
    const FusionResult r = fuse(inst.working, bank, p, c);

    for (Eigen::Index row = 0; row < r.attention.rows(); ++row) {
      stochastic_worst = std::max(stochastic_worst, std::abs(r.attention.row(row).sum() - 1.0));
    }
    check.expect(r.attention.minCoeff() >= 0.0, "negative attention weight");

    // The same offset on every key shifts each score row by a constant.
    MemoryBank shifted = bank;
    const Eigen::RowVectorXd offset = rng.normal_matrix(1, static_cast<Eigen::Index>(m), 2.0);
    for (auto& [room, e] : shifted.entries) e.key.rowwise() += offset;
    translation_worst =
        std::max(translation_worst, (fuse(inst.working, shifted, p, c).fused - r.fused).cwiseAbs().maxCoeff());

    // Rotate which observation is committed at which timestep.
    FusionInstance permuted = inst;
    for (std::size_t k = 0; k < entries; ++k) {
      permuted.episodes[k].observation = inst.episodes[(k + 1) % entries].observation;
    }
    FusionConfig off = c;
    off.time_embedding = false;
    const Matrix a = fuse(inst.working, build_bank(inst, p, off), p, off).fused;
    const Matrix b = fuse(permuted.working, build_bank(permuted, p, off), p, off).fused;
    permutation_worst = std::max(permutation_worst, (a - b).cwiseAbs().maxCoeff());

    const Matrix on = fuse(permuted.working, build_bank(permuted, p, c), p, c).fused;
    differing += (on - r.fused).cwiseAbs().maxCoeff() > 1e-6;
  }

  int exact = 0;
  for (int i = 0; i < 20; ++i) {
    const FusionConfig c = small_config(1, 2 * (1 + static_cast<std::size_t>(i % 4)));
    const ProjectionParams p = ProjectionParams::random(c, 60000 + static_cast<std::uint64_t>(i));
    const FusionInstance inst = random_instance(c, 1, rng);
    const MemoryBank bank = build_bank(inst, p, c);
    const Matrix fused = fuse(inst.working, bank, p, c).fused;
    exact += fused.leftCols(static_cast<Eigen::Index>(c.memory_dim)) == bank.entries.begin()->second.value;
  }

  check.expect(stochastic_worst <= 1e-9, "row sum deviation " + fmt(stochastic_worst));
  check.expect(translation_worst <= 1e-6, "key translation changed output by " + fmt(translation_worst));
  check.expect(exact == 20, "single-entry identity exact on " + std::to_string(exact) + "/20");
  check.expect(permutation_worst <= 1e-12, "permutation without time embedding " + fmt(permutation_worst));
  check.expect(differing >= 95, "permutation with time embedding detected on " + std::to_string(differing) + "/100");
  return check.done("row sums " + fmt(stochastic_worst) + ", translation " + fmt(translation_worst) +
                    ", identity 20/20, permutation off " + fmt(permutation_worst) + ", on " +
                    std::to_string(differing) + "/100");
}

// --- 6 ---------------------------------------------------------------------

Outcome fps_oracle() {
  Check check;
  SeededRng rng(6006);
  int ties = 0;
  for (int i = 0; i < 200; ++i) {
    const auto k = static_cast<Eigen::Index>(1 + memsim::testing::pick(rng, 32));
    Matrix pts(k, 3);
    const bool lattice = i % 2 == 1;
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index j = 0; j < 3; ++j) {
        // Small integer lattices and copied rows give many equal distances.
        pts(r, j) = lattice ? std::floor(rng.uniform(0, 3)) : rng.uniform(-1, 1);
      }
      if (i % 4 == 3 && r > 0 && rng.uniform() < 0.3) pts.row(r) = pts.row(r - 1);
    }
    ties += lattice;
    const std::size_t target = 1 + memsim::testing::pick(rng, static_cast<std::size_t>(k) + 2);
    const std::size_t start = memsim::testing::pick(rng, static_cast<std::size_t>(k));
    const auto got = farthest_point_sample(pts, target, start);
    check.expect(got == oracle::fps(pts, target, start), "set " + std::to_string(i) + " differs");
  }
  return check.done("200/200 sets match, " + std::to_string(ties) + " with tied distances");
}

// --- 7 ---------------------------------------------------------------------

std::vector<Vec3> slab(double y0, double y1) {
  return {{0, y0, 0}, {4, y0, 0}, {4, y1, 3}, {0, y1, 3}, {2, 0.5 * (y0 + y1), 1.5}};
}

Outcome geometry() {
  Check check;
  SeededRng rng(7007);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    CameraModel c;
    c.fx = rng.uniform(200, 800);
    c.fy = rng.uniform(200, 800);
    c.cx = rng.uniform(100, 400);
    c.cy = rng.uniform(100, 300);
    Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    q.normalize();
    c.pose.topLeftCorner<3, 3>() = q.toRotationMatrix();
    c.pose.topRightCorner<3, 1>() << rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5);
    const double u = rng.uniform(0, 640), v = rng.uniform(0, 480), z = rng.uniform(0.1, 10);
    const PixelDepth back = project(c, unproject(c, u, v, z));
    worst = std::max({worst, std::abs(back.u - u), std::abs(back.v - v), std::abs(back.depth - z)});
  }
  check.expect(worst <= 1e-9, "round trip error " + fmt(worst));

  const std::vector<double> elevations{0.0, 3.0};
  RoomSurfaces both{1, slab(0.0, 0.1), slab(2.4, 2.5), {}};
  const auto b = build_room_aabb(both, elevations);
  check.expect(b && *b == Aabb{{0, 0, 0}, {4, 2.5, 3}}, "both-surfaces branch");

  RoomSurfaces no_floor{2, std::nullopt, slab(5.6, 5.8), {}};
  const auto nf = build_room_aabb(no_floor, elevations);
  check.expect(nf && *nf == Aabb{{0, 3.0, 0}, {4, 5.8, 3}}, "missing-floor branch");

  RoomSurfaces none{3, std::nullopt, std::nullopt, {}};
  check.expect(!build_room_aabb(none, elevations), "discard branch");
  return check.done("round trip " + fmt(worst) + " over 1000 samples, 3/3 branches exact");
}

// --- 8 ---------------------------------------------------------------------

Outcome metrics() {
  Check check;
  for (const auto& f : memsim::testing::all_fixtures()) {
    const TaskScore s = score(f.scene, f.trajectory, f.trajectory, f.start_room);
    check.expect(s.sr == 1 && s.sub_sr == 1.0, f.name + " gold vs gold");
  }

  const Scene kitchen = memsim::testing::cooking_fixture().scene;
  const std::vector<std::string> gold_lines{
      "<PICK UP tomatoes(0) from room(8) in room(8)>",
      "<PUT DOWN tomatoes(0) from room(8) on countertop(1) in room(8)>",
      "<PICK UP eggs(0) from room(8) in room(8)>",
      "<PUT DOWN eggs(0) from room(8) on countertop(1) in room(8)>"};
  const Trajectory gold = memsim::testing::parse_lines(gold_lines);
  const Trajectory half = memsim::testing::parse_lines({gold_lines[0], gold_lines[1]});
  const TaskScore h = score(kitchen, gold, half, 8);
  check.expect(h.total_subgoals == 4 && h.sub_sr == 0.5, "2-of-4 sub_sr " + fmt(h.sub_sr));

  auto extra = gold_lines;
  extra.push_back("<PICK UP cooking pan(0) from room(8) in room(8)>");
  extra.push_back("<PUT DOWN cooking pan(0) from room(8) on stove(0) in room(8)>");
  const TaskScore x = score(kitchen, gold, memsim::testing::parse_lines(extra), 8);
  check.expect(x.sr == 0 && x.sub_sr == 1.0, "misplaced extra object");

  // Hand-computed: simple 50.0/68.75, medium 25.0/50.0, hard 0.0/25.0, overall 25.0/47.9.
  const int sr[12] = {1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0};
  const double sub[12] = {1, 1, 0.5, 0.25, 1, 0.5, 0.5, 0, 0.75, 0.25, 0, 0};
  std::vector<TaskScore> scores;
  std::vector<Tier> tiers;
  for (int i = 0; i < 12; ++i) {
    TaskScore s;
    s.sr = sr[i];
    s.sub_sr = sub[i];
    scores.push_back(s);
    tiers.push_back(static_cast<Tier>(i / 4));
  }
  // Interleave so that grouping, not input order, decides the rows.
  std::vector<TaskScore> mixed;
  std::vector<Tier> mixed_tiers;
  for (int i = 0; i < 12; ++i) {
    const int j = (i % 3) * 4 + i / 3;
    mixed.push_back(scores[j]);
    mixed_tiers.push_back(tiers[j]);
  }
  const SuiteReport rep = aggregate(mixed, mixed_tiers);
  const std::vector<std::tuple<std::string, double, double>> want{
      {"simple", 50.0, 68.75}, {"medium", 25.0, 50.0}, {"hard", 0.0, 25.0}, {"overall", 25.0, 47.9}};
  check.expect(rep.rows.size() == want.size(), "tier row count");
  for (std::size_t i = 0; i < std::min(rep.rows.size(), want.size()); ++i) {
    const auto& [name, srp, subp] = want[i];
    check.expect(rep.rows[i].name == name && std::abs(rep.rows[i].sr_percent - srp) <= 0.1 &&
                     std::abs(rep.rows[i].sub_sr_percent - subp) <= 0.1,
                 "tier row " + name);
  }
  return check.done("gold (1,1) on 2 fixtures, 2-of-4 = 0.5, extra object sr 0, 12-task tiers match");
}

// --- 9 ---------------------------------------------------------------------

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  Check check;
  const fs::path dir = fs::temp_directory_path() / "memsim_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string desk_scene = fixture_path("desk_scene.json");
  const std::string desk_traj = fixture_path("desk_trajectory.json");

  const nlohmann::json manifest = nlohmann::json::array(
      {{{"scene", desk_scene}, {"gold", desk_traj}, {"pred", desk_traj}, {"tier", "hard"}, {"start_room", 10}},
       {{"scene", fixture_path("cooking_scene.json")},
        {"gold", fixture_path("cooking_trajectory.json")},
        {"pred", fixture_path("cooking_trajectory.json")},
        {"tier", "medium"},
        {"start_room", 4}}});
  write_text_file((dir / "manifest.json").string(), manifest.dump());
  const nlohmann::json surfaces = {
      {"rooms",
       {{{"id", 1},
         {"floor", {{0, 0, 0}, {4, 0.05, 4}}},
         {"ceiling", {{0, 2.5, 0}, {4, 2.6, 4}}},
         {"objects", {{{"name", "chair"}, {"vertices", {{1, 0, 1}, {1.5, 1, 1.5}}}}}}},
        {{"id", 2}, {"objects", nlohmann::json::array()}}}}};
  write_text_file((dir / "surfaces.json").string(), surfaces.dump());

  const std::vector<std::vector<std::string>> commands = {
      {"validate", "--scene", desk_scene, "--trajectory", desk_traj, "--start-room", "10"},
      {"score", "--manifest", (dir / "manifest.json").string(), "--jobs", "1"},
      {"score", "--manifest", (dir / "manifest.json").string(), "--format", "text"},
      {"fuse", "--synthetic", "--seed", "9", "--oracle"},
      {"fuse", "--synthetic", "--seed", "9", "--init", "recent", "--entries", "3"},
      {"build-scene", "--surfaces", (dir / "surfaces.json").string()},
  };
  int identical = 0;
  for (const auto& cmd : commands) {
    const CliRun a = run(cmd), b = run(cmd);
    const bool ok = a.code == 0 && !a.out.empty() && a.out == b.out;
    check.expect(ok, cmd[0] + " output differs or failed");
    identical += ok;
  }
  const std::vector<std::string> parallel{"score", "--manifest", (dir / "manifest.json").string(), "--jobs", "4"};
  check.expect(run(parallel).out == run(commands[1]).out, "score output depends on --jobs");

  // Two banks built by identical command sequences must be byte-identical.
  std::string banks[2];
  for (int k = 0; k < 2; ++k) {
    const std::string bank = (dir / ("bank" + std::to_string(k) + ".json")).string();
    for (const char* room : {"3", "1", "3"}) {
      check.expect(run({"--seed", "4", "bank", "commit", "--bank", bank, "--room", room, "--synthetic"}).code == 0,
                   "bank commit failed");
    }
    banks[k] = slurp(bank);
    check.expect(run({"bank", "show", "--bank", bank}).out == run({"bank", "show", "--bank", bank}).out,
                 "bank show differs");
  }
  check.expect(!banks[0].empty() && banks[0] == banks[1], "bank files differ");

  // Zero-drift round trip at 17 significant digits.
  int exact_banks = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const FusionConfig c = small_config(1 + seed % 4, 2 * (1 + seed % 4));
    const ProjectionParams p = ProjectionParams::random(c, seed);
    SeededRng rng(seed + 100);
    const MemoryBank bank = build_bank(random_instance(c, 1 + seed % 3, rng), p, c);
    const std::string text = bank_to_text(bank);
    const MemoryBank back = bank_from_json(nlohmann::json::parse(text));
    exact_banks += back == bank && bank_to_text(back) == text;
  }
  const MemoryBank file_bank = load_bank((dir / "bank0.json").string());
  check.expect(bank_to_text(file_bank) == banks[0], "bank file does not re-serialize identically");
  check.expect(exact_banks == 25, "bank round trip drift on " + std::to_string(25 - exact_banks) + "/25");
  fs::remove_all(dir);
  return check.done(std::to_string(identical) + "/" + std::to_string(commands.size()) +
                    " commands byte-identical, bank commit/show stable, 25/25 banks round-trip exactly");
}

// --- 10 --------------------------------------------------------------------

Outcome parser() {
  Check check;
  SeededRng rng(10010);
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    const Action a = memsim::testing::random_action(rng);
    const std::string text = serialize_step(a);
    const Action back = parse_step(text);
    const bool ok = back == a && serialize_step(back) == text;
    check.expect(ok, "round trip of " + text);
    round_trips += ok;
  }
  for (const auto& f : memsim::testing::all_fixtures()) {
    const auto raw = read_json_file(fixture_path(f.name + "_trajectory.json"))["steps"].get<std::vector<std::string>>();
    std::size_t changed = 0;
    for (const auto& line : raw) {
      const std::string once = serialize_step(parse_step(line));
      check.expect(serialize_step(parse_step(once)) == once, f.name + " unstable: " + line);
      changed += once != line;
    }
    check.expect(changed == 0, f.name + " has " + std::to_string(changed) + " non-canonical steps");
    const auto doc = trajectory_to_json(f.trajectory);
    check.expect(trajectory_to_json(trajectory_from_json(doc)) == doc, f.name + " JSON not stable");
  }
  return check.done(std::to_string(round_trips) + "/1000 actions round-trip, both fixtures canonical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
      {"fixture validation", fixture_validation},
      {"mutation detection", mutation_detection},
      {"fusion oracle equivalence", fusion_oracle},
      {"gradient verification", gradient_verification},
      {"fusion invariants", fusion_invariants},
      {"fps oracle", fps_oracle},
      {"geometry", geometry},
      {"metrics", metrics},
      {"determinism and persistence", determinism},
      {"parser", parser},
  };
  const auto start = Clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
              << ": " << o.detail << "\n";
  }
  std::cout << "acceptance: " << (criteria.size() - failed) << "/" << criteria.size() << " passed in "
            << fmt(seconds_since(start)) << " s\n";
  return failed == 0 ? 0 : 1;
}
