#include "memsim/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "memsim/bank_io.hpp"
#include "memsim/error.hpp"
#include "memsim/json_util.hpp"
#include "memsim/scene_io.hpp"
#include "memsim/sim_io.hpp"
#include "memsim/trajectory_io.hpp"

namespace memsim {

using nlohmann::json;
namespace fs = std::filesystem;

Config config_from_json(const json& doc, Config base) {
  if (!doc.is_object()) throw InputError("config: expected an object");
  Config c = base;
  auto size = [](const json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
      throw InputError("config: '" + key + "' must be a positive integer");
    }
    return v.get<std::size_t>();
  };
  for (const auto& [key, v] : doc.items()) {
    auto& f = c.fusion;
    if (key == "model_dim") f.model_dim = size(v, key);
    else if (key == "memory_dim") f.memory_dim = size(v, key);
    else if (key == "hidden_dim") f.hidden_dim = size(v, key);
    else if (key == "tokens") f.tokens = size(v, key);
    else if (key == "views") f.views = size(v, key);
    else if (key == "patch_size") f.patch_size = size(v, key);
    else if (key == "token_cap") f.token_cap = size(v, key);
    else if (key == "fps_start") f.fps_start = v.get<std::size_t>();
    else if (key == "scale") f.scale = require_number(v, "scale");
    else if (key == "time_embed_base") f.time_embed_base = require_number(v, "time_embed_base");
    else if (key == "position_embed_base") f.position_embed_base = require_number(v, "position_embed_base");
    else if (key == "time_embedding") f.time_embedding = v.get<bool>();
    else if (key == "query_init") f.query_init = query_init_from_string(v.get<std::string>());
    else if (key == "activation") c.activation = activation_from_string(v.get<std::string>());
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else throw InputError("config: unknown key '" + key + "'");
  }
  c.fusion.check();
  return c;
}

json config_to_json(const Config& c) {
  const auto& f = c.fusion;
  return {{"model_dim", f.model_dim},
          {"memory_dim", f.memory_dim},
          {"hidden_dim", f.hidden_dim},
          {"tokens", f.tokens},
          {"views", f.views},
          {"patch_size", f.patch_size},
          {"token_cap", f.token_cap},
          {"fps_start", f.fps_start},
          {"scale", f.effective_scale()},
          {"time_embed_base", f.time_embed_base},
          {"position_embed_base", f.position_embed_base},
          {"time_embedding", f.time_embedding},
          {"query_init", to_string(f.query_init)},
          {"activation", to_string(c.activation)},
          {"seed", c.seed}};
}

std::vector<ManifestRow> load_manifest(const std::string& path) {
  const json doc = read_json_file(path);
  const json& tasks = doc.is_object() ? require(doc, "tasks") : doc;
  if (!tasks.is_array() || tasks.empty()) throw InputError(path + ": manifest lists no tasks");
  const fs::path dir = fs::path(path).parent_path();

  std::vector<ManifestRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const std::string where = path + ": task " + std::to_string(i);
    try {
      auto resolve = [&](const char* key) {
        fs::path p = require(t, key).get<std::string>();
        if (p.is_relative()) p = dir / p;
        if (!fs::exists(p)) throw InputError(std::string(key) + " file not found: " + p.string());
        return p.string();
      };
      ManifestRow row;
      row.scene = resolve("scene");
      row.gold = resolve("gold");
      row.pred = resolve("pred");
      row.tier = tier_from_string(t.value("tier", std::string("simple")));
      row.start_room = require_int(t, "start_room");
      rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return rows;
}

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  // validate / score
  std::string scene;
  std::string trajectory;
  std::string gold;
  std::string pred;
  std::string manifest;
  std::string report;
  std::string out;
  std::string format = "json";
  std::string tier = "simple";
  int start_room = 0;
  unsigned jobs = 1;

  // fuse / bank
  std::string bank;
  std::string query;
  std::string params;
  std::string init;
  bool synthetic = false;
  bool oracle = false;
  std::size_t entries = 3;
  int room = 0;
  std::optional<std::int64_t> t;
  std::string obs;

  // build-scene
  std::string surfaces;
};

Config resolve_config(const Options& o) {
  Config c;
  if (const char* env = std::getenv("MEMSIM_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("MEMSIM_SEED is not an unsigned integer: ") + env);
    }
  }
  if (!o.config_path.empty()) {
    try {
      c = config_from_json(read_json_file(o.config_path), c);
    } catch (const json::exception& e) {
      throw InputError(o.config_path + ": " + e.what());
    }
  }
  if (o.seed) c.seed = *o.seed;
  if (!o.init.empty()) c.fusion.query_init = query_init_from_string(o.init);
  c.fusion.check();
  return c;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

// --- validate ---------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = resolve_config(o);
  const Scene scene = load_scene(o.scene);
  const Trajectory traj = load_trajectory(o.trajectory);
  const ValidationReport report = validate(scene, traj, o.start_room);

  for (const auto& v : report.verdicts) {
    if (!v.valid) err << "step " << v.index << ": " << to_string(v.error_kind) << "\n";
    if (!v.warning.empty()) err << "step " << v.index << ": warning: " << v.warning << "\n";
  }
  if (!report.final_state.hand_empty()) {
    err << "trajectory ends holding " << report.final_state.hand.front().key.str() << "\n";
  }

  json doc = report_to_json(report);
  doc["seed"] = cfg.seed;
  emit(doc.dump(2) + "\n", o.report, out);
  return report.trajectory_valid ? kExitOk : kExitDomainFailure;
}

// --- score ------------------------------------------------------------------

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = resolve_config(o);
  std::vector<ManifestRow> rows;
  if (!o.manifest.empty()) {
    rows = load_manifest(o.manifest);
  } else {
    if (o.scene.empty() || o.gold.empty() || o.pred.empty()) {
      throw InputError("score: pass --manifest or all of --scene, --gold, --pred");
    }
    rows.push_back({o.scene, o.gold, o.pred, tier_from_string(o.tier), o.start_room});
  }

  // Workers own their inputs; results land at their manifest index.
  std::vector<TaskScore> scores(rows.size());
  std::vector<std::string> failures(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        const Scene scene = load_scene(rows[i].scene);
        scores[i] = score(scene, load_trajectory(rows[i].gold), load_trajectory(rows[i].pred),
                          rows[i].start_room);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(rows.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!failures[i].empty()) throw InputError("task " + std::to_string(i) + ": " + failures[i]);
  }

  std::vector<Tier> tiers;
  for (const auto& r : rows) tiers.push_back(r.tier);
  const SuiteReport suite = aggregate(scores, tiers);

  json tasks = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = scores[i];
    tasks.push_back({{"index", i},
                     {"scene", rows[i].scene},
                     {"gold", rows[i].gold},
                     {"pred", rows[i].pred},
                     {"tier", to_string(rows[i].tier)},
                     {"sr", s.sr},
                     {"sub_sr", s.sub_sr},
                     {"achieved", s.achieved},
                     {"total_subgoals", s.total_subgoals},
                     {"trajectory_valid", s.trajectory_valid},
                     {"final_state_matches", s.final_state_matches}});
  }
  json tier_rows = json::array();
  for (const auto& r : suite.rows) {
    tier_rows.push_back({{"tier", r.name},
                         {"tasks", r.tasks},
                         {"sr", round1(r.sr_percent)},
                         {"sub_sr", round1(r.sub_sr_percent)}});
  }
  const json doc = {{"seed", cfg.seed}, {"tasks", std::move(tasks)}, {"summary", std::move(tier_rows)}};

  if (!o.out.empty()) write_text_file(o.out, doc.dump(2) + "\n");
  if (o.format == "text") {
    out << format_report_table(suite);
  } else if (o.out.empty()) {
    out << doc.dump(2) << "\n";
  }
  err << "scored " << rows.size() << " task(s)\n";
  return kExitOk;
}

// --- fuse -------------------------------------------------------------------

ProjectionParams resolve_params(const Options& o, const Config& cfg) {
  ProjectionParams p = o.params.empty() ? ProjectionParams::random(cfg.fusion, cfg.seed, cfg.activation)
                                        : params_from_json(read_json_file(o.params));
  p.check(cfg.fusion);
  return p;
}

int cmd_fuse(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = resolve_config(o);
  const ProjectionParams params = resolve_params(o, cfg);

  MemoryBank bank;
  Matrix working;
  if (o.synthetic) {
    SeededRng rng(cfg.seed + 1);
    for (std::size_t i = 0; i < o.entries; ++i) {
      bank = commit(bank, static_cast<int>(i + 1), static_cast<std::int64_t>(i + 1),
                    synthetic_observation(cfg.fusion, rng), params, cfg.fusion);
    }
    working = synthetic_observation(cfg.fusion, rng);
  } else {
    if (o.bank.empty() || o.query.empty()) {
      throw InputError("fuse: pass --synthetic or both --bank and --query");
    }
    bank = load_bank(o.bank);
    working = working_from_json(read_json_file(o.query));
  }

  const FusionResult r = fuse(working, bank, params, cfg.fusion);
  const auto entropy = attention_entropy(r.attention);
  double mean = 0.0;
  for (double h : entropy) mean += h;
  mean /= static_cast<double>(entropy.size());

  std::string text = "{\n  \"seed\": " + std::to_string(cfg.seed) + ",\n  \"init\": \"" +
                     to_string(cfg.fusion.query_init) + "\",\n  \"bank_entries\": " +
                     std::to_string(bank.size()) + ",\n  \"rows\": " + std::to_string(r.fused.rows()) +
                     ",\n  \"cols\": " + std::to_string(r.fused.cols()) + ",\n  \"fused\": " +
                     matrix_to_text(r.fused) + ",\n  \"attention_entropy\": " +
                     vector_to_text(Eigen::Map<const Vector>(entropy.data(),
                                                             static_cast<Eigen::Index>(entropy.size()))) +
                     ",\n  \"mean_entropy\": " + format_double17(mean);

  int code = kExitOk;
  if (o.oracle) {
    const Matrix ref = fuse_reference(working, bank, params, cfg.fusion);
    const double diff = (ref - r.fused).cwiseAbs().maxCoeff();
    text += ",\n  \"oracle_max_abs_diff\": " + format_double17(diff);
    err << "oracle max abs diff: " << diff << "\n";
    if (!(diff <= 1e-6)) {
      err << "oracle mismatch above 1e-6\n";
      code = kExitDomainFailure;
    }
  }
  text += "\n}\n";
  emit(text, o.out, out);
  return code;
}

// --- build-scene ------------------------------------------------------------

int cmd_build_scene(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = resolve_config(o);
  const SceneBuild built = build_scene(load_surfaces(o.surfaces));
  for (int id : built.discarded_rooms) {
    err << "discarded room " << id << ": neither floor nor ceiling surface present\n";
  }
  json doc = scene_to_json(built.scene);
  doc["seed"] = cfg.seed;
  emit(doc.dump(2) + "\n", o.out, out);
  return kExitOk;
}

// --- bank -------------------------------------------------------------------

int cmd_bank_commit(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = resolve_config(o);
  const ProjectionParams params = resolve_params(o, cfg);
  MemoryBank bank;
  if (!o.bank.empty() && fs::exists(o.bank)) bank = load_bank(o.bank);

  Matrix working;
  if (o.synthetic) {
    SeededRng rng(cfg.seed + 1 + static_cast<std::uint64_t>(bank.clock));
    working = synthetic_observation(cfg.fusion, rng);
  } else {
    if (o.obs.empty()) throw InputError("bank commit: pass --obs or --synthetic");
    working = working_from_json(read_json_file(o.obs));
  }
  const std::int64_t t = o.t.value_or(bank.clock + 1);
  const bool replacing = bank.entries.contains(o.room);
  bank = commit(bank, o.room, t, working, params, cfg.fusion);
  err << (replacing ? "updated" : "added") << " room " << o.room << " at t=" << t << " ("
      << bank.size() << " entries)\n";

  const std::string dest = o.out.empty() ? o.bank : o.out;
  emit(bank_to_text(bank), dest, out);
  return kExitOk;
}

int cmd_bank_show(const Options& o, std::ostream& out, std::ostream&) {
  const MemoryBank bank = load_bank(o.bank);
  json entries = json::array();
  for (const auto* e : bank.chronological()) {
    entries.push_back({{"room", e->room}, {"t", e->t}, {"rows", e->key.rows()}, {"cols", e->key.cols()}});
  }
  out << json{{"clock", bank.clock}, {"entries", std::move(entries)}}.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embodied memory simulator: scene building, trajectory validation, scoring and memory fusion"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Seed (falls back to MEMSIM_SEED, then 0)");

  auto* validate_cmd = app.add_subcommand("validate", "Validate a trajectory against a scene");
  validate_cmd->add_option("--scene", o.scene)->required();
  validate_cmd->add_option("--trajectory", o.trajectory)->required();
  validate_cmd->add_option("--start-room", o.start_room)->required();
  validate_cmd->add_option("--report", o.report, "Write the report here instead of stdout");

  auto* score_cmd = app.add_subcommand("score", "Score predicted trajectories (SR / Sub-SR)");
  score_cmd->add_option("--scene", o.scene);
  score_cmd->add_option("--gold", o.gold);
  score_cmd->add_option("--pred", o.pred);
  score_cmd->add_option("--start-room", o.start_room);
  score_cmd->add_option("--tier", o.tier)->check(CLI::IsMember({"simple", "medium", "hard"}));
  score_cmd->add_option("--manifest", o.manifest);
  score_cmd->add_option("--out", o.out, "Write the JSON report here");
  score_cmd->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  score_cmd->add_option("--jobs", o.jobs)->check(CLI::PositiveNumber);

  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse working memory with an episodic memory bank");
  fuse_cmd->add_option("--bank", o.bank);
  fuse_cmd->add_option("--query", o.query, "Working-memory features (N x d)");
  fuse_cmd->add_option("--params", o.params, "Projection parameters (default: seeded random)");
  fuse_cmd->add_option("--init", o.init)->check(CLI::IsMember({"working", "recent", "zeros"}));
  fuse_cmd->add_option("--out", o.out);
  fuse_cmd->add_flag("--synthetic", o.synthetic, "Generate bank and query from the seed");
  fuse_cmd->add_option("--entries", o.entries, "Synthetic bank size")->check(CLI::PositiveNumber);
  fuse_cmd->add_flag("--oracle", o.oracle, "Cross-check against the extended-precision path");

  auto* build_cmd = app.add_subcommand("build-scene", "Build a scene file from labeled surfaces");
  build_cmd->add_option("--surfaces", o.surfaces)->required();
  build_cmd->add_option("--out", o.out);

  auto* bank_cmd = app.add_subcommand("bank", "Memory bank maintenance");
  bank_cmd->require_subcommand(1);
  auto* commit_cmd = bank_cmd->add_subcommand("commit", "Commit working memory for a room");
  commit_cmd->add_option("--bank", o.bank, "Bank file (created when missing)")->required();
  commit_cmd->add_option("--room", o.room)->required();
  commit_cmd->add_option("--t", o.t, "Timestep (default: clock + 1)");
  commit_cmd->add_option("--obs", o.obs, "Working-memory features (N x d)");
  commit_cmd->add_option("--params", o.params);
  commit_cmd->add_flag("--synthetic", o.synthetic);
  commit_cmd->add_option("--out", o.out, "Output path (default: overwrite --bank)");
  auto* show_cmd = bank_cmd->add_subcommand("show", "Summarise a bank file");
  show_cmd->add_option("--bank", o.bank)->required();

  std::vector<const char*> argv{"memsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    if (score_cmd->parsed()) return cmd_score(o, out, err);
    if (fuse_cmd->parsed()) return cmd_fuse(o, out, err);
    if (build_cmd->parsed()) return cmd_build_scene(o, out, err);
    if (commit_cmd->parsed()) return cmd_bank_commit(o, out, err);
    if (show_cmd->parsed()) return cmd_bank_show(o, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace memsim
