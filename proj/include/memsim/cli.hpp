#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "memsim/memory.hpp"
#include "memsim/metrics.hpp"

namespace memsim {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainFailure = 1;  // invalid trajectory, empty bank, oracle mismatch
inline constexpr int kExitInputError = 2;     // I/O, parse and usage errors

struct Config {
  FusionConfig fusion;
  Activation activation = Activation::Silu;
  std::uint64_t seed = 0;
};

// Recognised keys: model_dim, memory_dim, hidden_dim, tokens, views, patch_size,
// scale, time_embed_base, position_embed_base, time_embedding, token_cap,
// fps_start, query_init, activation, seed. Unknown keys are rejected.
Config config_from_json(const nlohmann::json& doc, Config base = {});
nlohmann::json config_to_json(const Config& config);

struct ManifestRow {
  std::string scene;
  std::string gold;
  std::string pred;
  Tier tier = Tier::Simple;
  int start_room = 0;
};

// {"tasks": [{"scene", "gold", "pred", "tier", "start_room"}]} or a bare array.
// Relative paths resolve against the manifest's directory; every path must exist.
std::vector<ManifestRow> load_manifest(const std::string& path);

// Entry point behind the `memsim` binary. Machine output goes to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memsim
