#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "memsim/scene.hpp"

namespace memsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Configuration

enum class QueryInit { WorkingMemory, MostRecentEpisodic, Zeros };

const char* to_string(QueryInit q);
// Accepts "working", "recent", "zeros" (and the enum spellings).
QueryInit query_init_from_string(const std::string& s);

enum class Activation { Silu, Identity };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct FusionConfig {
  std::size_t model_dim = 36;   // d, multiple of 6
  std::size_t memory_dim = 16;  // M
  std::size_t hidden_dim = 16;  // width of the projection MLP
  std::size_t tokens = 8;       // N after farthest point sampling
  std::size_t views = 2;        // V
  std::size_t patch_size = 16;  // P
  QueryInit query_init = QueryInit::WorkingMemory;
  double scale = 0.0;  // C in the attention temperature; 0 selects memory_dim
  double time_embed_base = 10000.0;
  double position_embed_base = 10000.0;
  bool time_embedding = true;
  // Working-memory token capacity (an 8192-token context window).
  std::size_t token_cap = 8192;
  std::size_t fps_start = 0;

  double effective_scale() const { return scale > 0.0 ? scale : static_cast<double>(memory_dim); }
  // Throws InputError on non-positive dims, odd M, d not divisible by 6, etc.
  void check() const;
};

// ---------------------------------------------------------------------------
// Seeded generation. Built on mt19937_64 with explicit conversions so that
// streams are identical across standard libraries.

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();   // Box-Muller
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, double stddev);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Camera geometry

struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  // Camera -> world rigid transform.
  Eigen::Matrix4d pose = Eigen::Matrix4d::Identity();

  // fx, fy > 0 and an orthonormal rotation block (1e-9).
  void check() const;
};

struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// Pixel (u, v) at camera-frame depth z > 0 to world coordinates.
Vec3 unproject(const CameraModel& camera, double u, double v, double depth);
// World point to pixel + camera-frame depth.
PixelDepth project(const CameraModel& camera, const Vec3& world);

// ---------------------------------------------------------------------------
// Embeddings

// Per-axis interleaved sin/cos, d/3 lanes per axis with frequencies
// base^(-2i/(d/3)). positions: N x 3, result: N x d. Requires d % 6 == 0.
Matrix position_embed(const Matrix& positions, std::size_t dim, double base = 10000.0);

// Interleaved [sin(t w_0), cos(t w_0), sin(t w_1), ...], w_i = base^(-2i/M).
// Requires even M.
Vector time_embed(std::int64_t t, std::size_t dim, double base = 10000.0);

// ---------------------------------------------------------------------------
// Farthest point sampling

// Greedy max-min selection over rows of `points` (K x 3), starting at `start`.
// Squared Euclidean distance; ties go to the lowest index. Returns
// min(target, K) distinct indices in selection order.
std::vector<std::size_t> farthest_point_sample(const Matrix& points, std::size_t target,
                                               std::size_t start = 0);

// ---------------------------------------------------------------------------
// 3D patches

struct ViewObservation {
  CameraModel camera;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> depth;  // row-major height x width, <= 0 means no reading
  Matrix patch_features;      // (w*h) x d, row = py * w + px
};

struct PatchGrid {
  std::size_t views = 0;
  std::size_t patches_w = 0;  // floor(W / P)
  std::size_t patches_h = 0;  // floor(H / P)
  std::size_t patch_size = 0;
  Matrix features;   // (V*w*h) x d
  Matrix positions;  // (V*w*h) x 3, mean world point of the patch's valid pixels
  std::vector<bool> has_depth;
};

PatchGrid build_patch_grid(std::span<const ViewObservation> views, std::size_t patch_size);

struct WorkingMemory {
  Matrix tokens;     // N x d pixel-aligned 3D patch features
  Matrix positions;  // N x 3
  std::vector<std::size_t> source_rows;  // rows of the patch grid that were kept
};

// Adds position embeddings to the patch features and keeps config.tokens of
// them by farthest point sampling over patch positions.
WorkingMemory encode_observation(const PatchGrid& grid, const FusionConfig& config);

// ---------------------------------------------------------------------------
// Projection and the episodic memory bank

struct Affine {
  Matrix weight;  // out x in
  Vector bias;    // out

  // Rows of `x` are tokens.
  Matrix apply(const Matrix& x) const {
    return (x * weight.transpose()).rowwise() + bias.transpose();
  }
  bool operator==(const Affine&) const = default;
};

struct ProjectionParams {
  Affine mlp_in;   // d -> hidden
  Affine mlp_out;  // hidden -> M
  Affine key;      // M -> M
  Affine value;    // M -> M
  Affine query;    // d -> M
  Activation activation = Activation::Silu;

  static ProjectionParams random(const FusionConfig& config, std::uint64_t seed,
                                 Activation activation = Activation::Silu);
  // Shape check against the config; throws InputError.
  void check(const FusionConfig& config) const;
  bool operator==(const ProjectionParams&) const = default;
};

struct MemoryFeatures {
  Matrix key;    // N x M
  Matrix value;  // N x M
};

// MLP into memory space, then the separate key and value heads.
MemoryFeatures project_to_memory(const Matrix& x, const ProjectionParams& params);

struct MemoryEntry {
  int room = 0;
  std::int64_t t = 0;
  Matrix key;    // time embedding already added
  Matrix value;  // time embedding already added
  bool operator==(const MemoryEntry&) const = default;
};

struct MemoryBank {
  std::map<int, MemoryEntry> entries;  // one per room
  std::int64_t clock = 0;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  const MemoryEntry& latest() const;
  // Entries ordered by timestep.
  std::vector<const MemoryEntry*> chronological() const;
  bool operator==(const MemoryBank&) const = default;
};

// Moves a room's working memory into the bank at timestep t (> clock),
// replacing any existing entry for that room.
MemoryBank commit(const MemoryBank& bank, int room, std::int64_t t, const Matrix& working,
                  const ProjectionParams& params, const FusionConfig& config);

// ---------------------------------------------------------------------------
// Memory fusion

struct FusionResult {
  Matrix fused;      // N x 2M: [attention read-out, query]
  Matrix attention;  // N x (T*N) row-stochastic weights over chronological bank rows
  Matrix query;      // N x M
};

Matrix make_query(const Matrix& working, const MemoryBank& bank, const ProjectionParams& params,
                  const FusionConfig& config);

FusionResult fuse(const Matrix& working, const MemoryBank& bank, const ProjectionParams& params,
                  const FusionConfig& config);

// Same computation in long double scalar loops, used by the CLI cross-check.
Matrix fuse_reference(const Matrix& working, const MemoryBank& bank,
                      const ProjectionParams& params, const FusionConfig& config);

// Shannon entropy (nats) of each attention row.
std::vector<double> attention_entropy(const Matrix& attention);

// ---------------------------------------------------------------------------
// Gradient verification

struct Episode {
  int room = 0;
  std::int64_t t = 0;
  Matrix observation;  // N x d
};

// A working memory plus the raw observations that populate the bank.
struct FusionInstance {
  Matrix working;
  std::vector<Episode> episodes;
};

MemoryBank build_bank(const FusionInstance& instance, const ProjectionParams& params,
                      const FusionConfig& config);

// Sum of all entries of the fused output.
double fusion_loss(const FusionInstance& instance, const ProjectionParams& params,
                   const FusionConfig& config);

// Analytic gradient of fusion_loss, laid out like the parameters.
ProjectionParams fusion_loss_gradient(const FusionInstance& instance,
                                      const ProjectionParams& params,
                                      const FusionConfig& config);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_group;
  std::map<std::string, double> group_max_rel_error;
};

// Analytic vs central finite differences for every parameter scalar.
// Relative error |a - n| / max(|a|, |n|, 1e-6).
GradCheckResult grad_check(const FusionInstance& instance, const ProjectionParams& params,
                           const FusionConfig& config, double step = 1e-5);

// Visits every parameter tensor with a stable name ("mlp_in.weight", ...).
template <typename Params, typename Fn>
void for_each_parameter(Params& p, Fn&& fn) {
  fn("mlp_in.weight", p.mlp_in.weight);
  fn("mlp_in.bias", p.mlp_in.bias);
  fn("mlp_out.weight", p.mlp_out.weight);
  fn("mlp_out.bias", p.mlp_out.bias);
  fn("key.weight", p.key.weight);
  fn("key.bias", p.key.bias);
  fn("value.weight", p.value.weight);
  fn("value.bias", p.value.bias);
  fn("query.weight", p.query.weight);
  fn("query.bias", p.query.bias);
}

// Random instance with `entries` distinct rooms at timesteps 1..entries.
FusionInstance random_instance(const FusionConfig& config, std::size_t entries, SeededRng& rng);

// Synthetic RGB-D style observation run through the full patch pipeline.
Matrix synthetic_observation(const FusionConfig& config, SeededRng& rng);

}  // namespace memsim
