#include "memsim/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "memsim/error.hpp"

namespace memsim {

const char* to_string(QueryInit q) {
  switch (q) {
    case QueryInit::WorkingMemory: return "working";
    case QueryInit::MostRecentEpisodic: return "recent";
    case QueryInit::Zeros: return "zeros";
  }
  return "?";
}

QueryInit query_init_from_string(const std::string& s) {
  if (s == "working" || s == "WorkingMemory") return QueryInit::WorkingMemory;
  if (s == "recent" || s == "MostRecentEpisodic") return QueryInit::MostRecentEpisodic;
  if (s == "zeros" || s == "Zeros") return QueryInit::Zeros;
  throw InputError("unknown query init '" + s + "' (expected working|recent|zeros)");
}

const char* to_string(Activation a) {
  switch (a) {
    case Activation::Silu: return "silu";
    case Activation::Identity: return "identity";
  }
  return "?";
}

Activation activation_from_string(const std::string& s) {
  if (s == "silu") return Activation::Silu;
  if (s == "identity") return Activation::Identity;
  throw InputError("unknown activation '" + s + "'");
}

void FusionConfig::check() const {
  if (model_dim == 0 || memory_dim == 0 || hidden_dim == 0 || tokens == 0 || views == 0 ||
      patch_size == 0 || token_cap == 0) {
    throw InputError("config: dimensions must be positive");
  }
  if (memory_dim % 2 != 0) throw InputError("config: memory dim M must be even");
  if (model_dim % 6 != 0) throw InputError("config: model dim d must be divisible by 6");
  if (tokens > token_cap) {
    throw InputError("config: token budget " + std::to_string(tokens) + " exceeds capacity " +
                     std::to_string(token_cap));
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw InputError("config: scale must be >= 0");
  if (!(time_embed_base > 0.0) || !(position_embed_base > 0.0)) {
    throw InputError("config: embedding bases must be positive");
  }
}

// ---------------------------------------------------------------------------

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Matrix SeededRng::normal_matrix(Eigen::Index rows, Eigen::Index cols, double stddev) {
  Matrix m(rows, cols);
  // Row-major fill order keeps streams independent of Eigen's storage order.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = stddev * normal();
  }
  return m;
}

// ---------------------------------------------------------------------------

void CameraModel::check() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw InputError("camera: focal lengths must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy) || !pose.allFinite()) {
    throw InputError("camera: non-finite parameters");
  }
  const Eigen::Matrix3d r = pose.topLeftCorner<3, 3>();
  if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
      r.determinant() < 0.0) {
    throw InputError("camera: pose rotation is not orthonormal");
  }
  if (pose.row(3) != Eigen::RowVector4d(0, 0, 0, 1)) {
    throw InputError("camera: pose bottom row must be [0 0 0 1]");
  }
}

Vec3 unproject(const CameraModel& camera, double u, double v, double depth) {
  if (!(depth > 0.0)) throw InputError("unproject: depth must be positive");
  const Eigen::Vector3d cam((u - camera.cx) * depth / camera.fx,
                            (v - camera.cy) * depth / camera.fy, depth);
  const Eigen::Vector3d world =
      camera.pose.topLeftCorner<3, 3>() * cam + camera.pose.topRightCorner<3, 1>();
  return {world.x(), world.y(), world.z()};
}

PixelDepth project(const CameraModel& camera, const Vec3& world) {
  const Eigen::Vector3d w(world.x, world.y, world.z);
  const Eigen::Vector3d cam =
      camera.pose.topLeftCorner<3, 3>().transpose() * (w - camera.pose.topRightCorner<3, 1>());
  if (!(cam.z() > 0.0)) throw InputError("project: point is behind the camera");
  return {camera.fx * cam.x() / cam.z() + camera.cx, camera.fy * cam.y() / cam.z() + camera.cy,
          cam.z()};
}

// ---------------------------------------------------------------------------

Matrix position_embed(const Matrix& positions, std::size_t dim, double base) {
  if (positions.cols() != 3) throw InputError("position_embed: positions must be N x 3");
  if (dim == 0 || dim % 6 != 0) throw InputError("position_embed: d must be a positive multiple of 6");
  const auto per_axis = static_cast<Eigen::Index>(dim / 3);
  const Eigen::Index pairs = per_axis / 2;
  Vector freq(pairs);
  for (Eigen::Index i = 0; i < pairs; ++i) {
    freq(i) = std::pow(base, -2.0 * static_cast<double>(i) / static_cast<double>(per_axis));
  }
  Matrix out(positions.rows(), static_cast<Eigen::Index>(dim));
  for (Eigen::Index n = 0; n < positions.rows(); ++n) {
    for (Eigen::Index axis = 0; axis < 3; ++axis) {
      const double p = positions(n, axis);
      for (Eigen::Index i = 0; i < pairs; ++i) {
        out(n, axis * per_axis + 2 * i) = std::sin(p * freq(i));
        out(n, axis * per_axis + 2 * i + 1) = std::cos(p * freq(i));
      }
    }
  }
  return out;
}

Vector time_embed(std::int64_t t, std::size_t dim, double base) {
  if (dim == 0 || dim % 2 != 0) throw InputError("time_embed: dimension must be even");
  if (t < 0) throw InputError("time_embed: negative timestep");
  Vector out(static_cast<Eigen::Index>(dim));
  const auto half = static_cast<Eigen::Index>(dim / 2);
  for (Eigen::Index i = 0; i < half; ++i) {
    const double w = std::pow(base, -2.0 * static_cast<double>(i) / static_cast<double>(dim));
    out(2 * i) = std::sin(static_cast<double>(t) * w);
    out(2 * i + 1) = std::cos(static_cast<double>(t) * w);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> farthest_point_sample(const Matrix& points, std::size_t target,
                                               std::size_t start) {
  const auto k = static_cast<std::size_t>(points.rows());
  if (k == 0) throw InputError("fps: empty point set");
  if (points.cols() != 3) throw InputError("fps: points must be K x 3");
  if (start >= k) throw InputError("fps: start index out of range");

  const std::size_t count = std::min(target, k);
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  if (count == 0) return chosen;

  std::vector<bool> taken(k, false);
  std::vector<double> nearest(k, std::numeric_limits<double>::infinity());
  std::size_t current = start;
  while (true) {
    chosen.push_back(current);
    taken[current] = true;
    if (chosen.size() == count) break;
    std::size_t best = k;
    double best_d = -1.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (taken[i]) continue;
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(current);
      const double dx = points(a, 0) - points(b, 0);
      const double dy = points(a, 1) - points(b, 1);
      const double dz = points(a, 2) - points(b, 2);
      const double d2 = dx * dx + dy * dy + dz * dz;
      nearest[i] = std::min(nearest[i], d2);
      if (nearest[i] > best_d) {
        best_d = nearest[i];
        best = i;
      }
    }
    current = best;
  }
  return chosen;
}

// ---------------------------------------------------------------------------

PatchGrid build_patch_grid(std::span<const ViewObservation> views, std::size_t patch_size) {
  if (views.empty()) throw InputError("patch grid: no views");
  if (patch_size == 0) throw InputError("patch grid: patch size must be positive");

  PatchGrid grid;
  grid.views = views.size();
  grid.patch_size = patch_size;
  grid.patches_w = views.front().width / patch_size;
  grid.patches_h = views.front().height / patch_size;
  const std::size_t per_view = grid.patches_w * grid.patches_h;
  if (per_view == 0) throw InputError("patch grid: image smaller than one patch");
  const Eigen::Index dim = views.front().patch_features.cols();

  grid.features.resize(static_cast<Eigen::Index>(per_view * views.size()), dim);
  grid.positions.setZero(static_cast<Eigen::Index>(per_view * views.size()), 3);
  grid.has_depth.assign(per_view * views.size(), false);

  for (std::size_t v = 0; v < views.size(); ++v) {
    const ViewObservation& view = views[v];
    const std::string where = "view " + std::to_string(v);
    view.camera.check();
    if (view.width / patch_size != grid.patches_w || view.height / patch_size != grid.patches_h) {
      throw InputError(where + ": image size differs from the first view");
    }
    if (view.depth.size() != view.width * view.height) {
      throw InputError(where + ": depth buffer size does not match width x height");
    }
    if (view.patch_features.rows() != static_cast<Eigen::Index>(per_view) ||
        view.patch_features.cols() != dim) {
      throw InputError(where + ": patch features must be (w*h) x d");
    }
    const auto offset = static_cast<Eigen::Index>(v * per_view);
    grid.features.middleRows(offset, static_cast<Eigen::Index>(per_view)) = view.patch_features;

    for (std::size_t py = 0; py < grid.patches_h; ++py) {
      for (std::size_t px = 0; px < grid.patches_w; ++px) {
        Vec3 sum;
        std::size_t hits = 0;
        for (std::size_t y = py * patch_size; y < (py + 1) * patch_size; ++y) {
          for (std::size_t x = px * patch_size; x < (px + 1) * patch_size; ++x) {
            const double z = view.depth[y * view.width + x];
            if (!(z > 0.0) || !std::isfinite(z)) continue;
            sum = sum + unproject(view.camera, static_cast<double>(x), static_cast<double>(y), z);
            ++hits;
          }
        }
        const std::size_t row = v * per_view + py * grid.patches_w + px;
        if (hits == 0) continue;
        const Vec3 mean = sum * (1.0 / static_cast<double>(hits));
        grid.positions.row(static_cast<Eigen::Index>(row)) << mean.x, mean.y, mean.z;
        grid.has_depth[row] = true;
      }
    }
  }
  return grid;
}

WorkingMemory encode_observation(const PatchGrid& grid, const FusionConfig& config) {
  config.check();
  if (grid.features.cols() != static_cast<Eigen::Index>(config.model_dim)) {
    throw InputError("encode: patch features have width " + std::to_string(grid.features.cols()) +
                     ", expected d = " + std::to_string(config.model_dim));
  }
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < grid.has_depth.size(); ++i) {
    if (grid.has_depth[i]) valid.push_back(i);
  }
  if (valid.size() < config.tokens) {
    throw InputError("encode: only " + std::to_string(valid.size()) +
                     " patches carry depth, fewer than the token budget " +
                     std::to_string(config.tokens));
  }
  Matrix pts(static_cast<Eigen::Index>(valid.size()), 3);
  for (std::size_t i = 0; i < valid.size(); ++i) {
    pts.row(static_cast<Eigen::Index>(i)) = grid.positions.row(static_cast<Eigen::Index>(valid[i]));
  }
  const std::size_t start = std::min(config.fps_start, valid.size() - 1);
  const auto picked = farthest_point_sample(pts, config.tokens, start);

  WorkingMemory wm;
  wm.positions.resize(static_cast<Eigen::Index>(picked.size()), 3);
  wm.tokens.resize(static_cast<Eigen::Index>(picked.size()), grid.features.cols());
  for (std::size_t i = 0; i < picked.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(valid[picked[i]]);
    wm.positions.row(static_cast<Eigen::Index>(i)) = grid.positions.row(row);
    wm.tokens.row(static_cast<Eigen::Index>(i)) = grid.features.row(row);
    wm.source_rows.push_back(valid[picked[i]]);
  }
  wm.tokens += position_embed(wm.positions, config.model_dim, config.position_embed_base);
  return wm;
}

// ---------------------------------------------------------------------------

namespace {

Affine random_affine(std::size_t in, std::size_t out, SeededRng& rng) {
  const double stddev = 1.0 / std::sqrt(static_cast<double>(in));
  Affine a;
  a.weight = rng.normal_matrix(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in), stddev);
  a.bias = rng.normal_matrix(static_cast<Eigen::Index>(out), 1, 0.1);
  return a;
}

void check_affine(const Affine& a, std::size_t in, std::size_t out, const char* name) {
  if (a.weight.rows() != static_cast<Eigen::Index>(out) ||
      a.weight.cols() != static_cast<Eigen::Index>(in) ||
      a.bias.size() != static_cast<Eigen::Index>(out)) {
    throw InputError(std::string("params: ") + name + " expects " + std::to_string(out) + "x" +
                     std::to_string(in) + " weights, got " + std::to_string(a.weight.rows()) +
                     "x" + std::to_string(a.weight.cols()));
  }
  if (!a.weight.allFinite() || !a.bias.allFinite()) {
    throw InputError(std::string("params: ") + name + " has non-finite entries");
  }
}

Matrix activate(const Matrix& h, Activation act) {
  if (act == Activation::Identity) return h;
  return h.unaryExpr([](double x) { return x / (1.0 + std::exp(-x)); });
}

}  // namespace

ProjectionParams ProjectionParams::random(const FusionConfig& config, std::uint64_t seed,
                                          Activation activation) {
  SeededRng rng(seed);
  ProjectionParams p;
  p.mlp_in = random_affine(config.model_dim, config.hidden_dim, rng);
  p.mlp_out = random_affine(config.hidden_dim, config.memory_dim, rng);
  p.key = random_affine(config.memory_dim, config.memory_dim, rng);
  p.value = random_affine(config.memory_dim, config.memory_dim, rng);
  p.query = random_affine(config.model_dim, config.memory_dim, rng);
  p.activation = activation;
  return p;
}

void ProjectionParams::check(const FusionConfig& config) const {
  check_affine(mlp_in, config.model_dim, config.hidden_dim, "mlp_in");
  check_affine(mlp_out, config.hidden_dim, config.memory_dim, "mlp_out");
  check_affine(key, config.memory_dim, config.memory_dim, "key");
  check_affine(value, config.memory_dim, config.memory_dim, "value");
  check_affine(query, config.model_dim, config.memory_dim, "query");
}

MemoryFeatures project_to_memory(const Matrix& x, const ProjectionParams& params) {
  if (x.cols() != params.mlp_in.weight.cols()) {
    throw InputError("project: input width " + std::to_string(x.cols()) + " != d = " +
                     std::to_string(params.mlp_in.weight.cols()));
  }
  const Matrix z = params.mlp_out.apply(activate(params.mlp_in.apply(x), params.activation));
  return {params.key.apply(z), params.value.apply(z)};
}

const MemoryEntry& MemoryBank::latest() const {
  if (entries.empty()) throw DomainError("memory bank is empty");
  const MemoryEntry* best = nullptr;
  for (const auto& [room, e] : entries) {
    if (!best || e.t > best->t) best = &e;
  }
  return *best;
}

std::vector<const MemoryEntry*> MemoryBank::chronological() const {
  std::vector<const MemoryEntry*> out;
  for (const auto& [room, e] : entries) out.push_back(&e);
  std::sort(out.begin(), out.end(), [](const MemoryEntry* a, const MemoryEntry* b) {
    return a->t != b->t ? a->t < b->t : a->room < b->room;
  });
  return out;
}

namespace {

void check_working(const Matrix& working, const FusionConfig& config) {
  if (working.cols() != static_cast<Eigen::Index>(config.model_dim)) {
    throw InputError("working memory width " + std::to_string(working.cols()) + " != d = " +
                     std::to_string(config.model_dim));
  }
  if (working.rows() == 0) throw InputError("working memory has no tokens");
  if (static_cast<std::size_t>(working.rows()) > config.token_cap) {
    throw InputError("working memory holds " + std::to_string(working.rows()) +
                     " tokens, above the capacity of " + std::to_string(config.token_cap));
  }
  if (!working.allFinite()) throw InputError("working memory has non-finite entries");
}

}  // namespace

MemoryBank commit(const MemoryBank& bank, int room, std::int64_t t, const Matrix& working,
                  const ProjectionParams& params, const FusionConfig& config) {
  config.check();
  params.check(config);
  check_working(working, config);
  if (t < 1) throw InputError("commit: timestep must be >= 1");
  if (t <= bank.clock) {
    throw InputError("commit: non-monotonic timestep " + std::to_string(t) + " (clock is " +
                     std::to_string(bank.clock) + ")");
  }
  MemoryFeatures f = project_to_memory(working, params);
  if (config.time_embedding) {
    const Vector e = time_embed(t, config.memory_dim, config.time_embed_base);
    f.key.rowwise() += e.transpose();
    f.value.rowwise() += e.transpose();
  }
  MemoryBank out = bank;
  out.entries[room] = MemoryEntry{room, t, std::move(f.key), std::move(f.value)};
  out.clock = t;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_bank(const MemoryBank& bank, const FusionConfig& config) {
  if (bank.empty()) throw DomainError("cannot fuse against an empty memory bank");
  for (const auto& [room, e] : bank.entries) {
    if (e.key.cols() != static_cast<Eigen::Index>(config.memory_dim) ||
        e.value.cols() != static_cast<Eigen::Index>(config.memory_dim) ||
        e.key.rows() != e.value.rows() || e.key.rows() == 0) {
      throw InputError("bank entry for room " + std::to_string(room) +
                       " does not have matching N x M key/value blocks");
    }
  }
}

}  // namespace

Matrix make_query(const Matrix& working, const MemoryBank& bank, const ProjectionParams& params,
                  const FusionConfig& config) {
  switch (config.query_init) {
    case QueryInit::WorkingMemory: return params.query.apply(working);
    case QueryInit::MostRecentEpisodic: {
      const Matrix& k = bank.latest().key;
      if (k.rows() != working.rows()) {
        throw InputError("most-recent query has " + std::to_string(k.rows()) +
                         " rows but working memory has " + std::to_string(working.rows()));
      }
      return k;
    }
    case QueryInit::Zeros:
      return Matrix::Zero(working.rows(), static_cast<Eigen::Index>(config.memory_dim));
  }
  throw InputError("unknown query init");
}

FusionResult fuse(const Matrix& working, const MemoryBank& bank, const ProjectionParams& params,
                  const FusionConfig& config) {
  config.check();
  params.check(config);
  check_working(working, config);
  check_bank(bank, config);

  const auto entries = bank.chronological();
  Eigen::Index rows = 0;
  for (const auto* e : entries) rows += e->key.rows();
  const auto m = static_cast<Eigen::Index>(config.memory_dim);
  Matrix keys(rows, m);
  Matrix values(rows, m);
  Eigen::Index at = 0;
  for (const auto* e : entries) {
    keys.middleRows(at, e->key.rows()) = e->key;
    values.middleRows(at, e->value.rows()) = e->value;
    at += e->key.rows();
  }

  FusionResult r;
  r.query = make_query(working, bank, params, config);
  Matrix logits = (r.query * keys.transpose()) / std::sqrt(config.effective_scale());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double peak = logits.row(i).maxCoeff();
    logits.row(i) = (logits.row(i).array() - peak).exp().matrix();
    logits.row(i) /= logits.row(i).sum();
  }
  r.attention = std::move(logits);
  r.fused.resize(r.query.rows(), 2 * m);
  r.fused.leftCols(m) = r.attention * values;
  r.fused.rightCols(m) = r.query;
  return r;
}

Matrix fuse_reference(const Matrix& working, const MemoryBank& bank,
                      const ProjectionParams& params, const FusionConfig& config) {
  using real = long double;
  config.check();
  params.check(config);
  check_working(working, config);
  check_bank(bank, config);

  const auto m = static_cast<Eigen::Index>(config.memory_dim);
  const Eigen::Index n = working.rows();
  std::vector<std::vector<real>> q(static_cast<std::size_t>(n), std::vector<real>(m, 0.0L));
  if (config.query_init == QueryInit::WorkingMemory) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        real acc = params.query.bias(j);
        for (Eigen::Index c = 0; c < working.cols(); ++c) {
          acc += static_cast<real>(working(i, c)) * params.query.weight(j, c);
        }
        q[i][j] = acc;
      }
    }
  } else if (config.query_init == QueryInit::MostRecentEpisodic) {
    const Matrix& k = bank.latest().key;
    if (k.rows() != n) throw InputError("most-recent query row count mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) q[i][j] = k(i, j);
    }
  }

  const auto entries = bank.chronological();
  Matrix out(n, 2 * m);
  const real inv_sqrt_c = 1.0L / std::sqrt(static_cast<real>(config.effective_scale()));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<real> logits;
    for (const auto* e : entries) {
      const Matrix& k = e->key;
      for (Eigen::Index r = 0; r < k.rows(); ++r) {
        real dot = 0.0L;
        for (Eigen::Index j = 0; j < m; ++j) dot += q[i][j] * static_cast<real>(k(r, j));
        logits.push_back(dot * inv_sqrt_c);
      }
    }
    const real peak = *std::max_element(logits.begin(), logits.end());
    real total = 0.0L;
    for (auto& l : logits) {
      l = std::exp(l - peak);
      total += l;
    }
    std::vector<real> acc(static_cast<std::size_t>(m), 0.0L);
    std::size_t idx = 0;
    for (const auto* e : entries) {
      const Matrix& v = e->value;
      for (Eigen::Index r = 0; r < v.rows(); ++r, ++idx) {
        const real w = logits[idx] / total;
        for (Eigen::Index j = 0; j < m; ++j) acc[j] += w * static_cast<real>(v(r, j));
      }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = static_cast<double>(acc[j]);
      out(i, m + j) = static_cast<double>(q[i][j]);
    }
  }
  return out;
}

std::vector<double> attention_entropy(const Matrix& attention) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(attention.rows()));
  for (Eigen::Index i = 0; i < attention.rows(); ++i) {
    double h = 0.0;
    for (Eigen::Index j = 0; j < attention.cols(); ++j) {
      const double p = attention(i, j);
      if (p > 0.0) h -= p * std::log(p);
    }
    out.push_back(h);
  }
  return out;
}

// ---------------------------------------------------------------------------

MemoryBank build_bank(const FusionInstance& instance, const ProjectionParams& params,
                      const FusionConfig& config) {
  MemoryBank bank;
  for (const auto& ep : instance.episodes) {
    bank = commit(bank, ep.room, ep.t, ep.observation, params, config);
  }
  return bank;
}

double fusion_loss(const FusionInstance& instance, const ProjectionParams& params,
                   const FusionConfig& config) {
  return fuse(instance.working, build_bank(instance, params, config), params, config).fused.sum();
}

FusionInstance random_instance(const FusionConfig& config, std::size_t entries, SeededRng& rng) {
  const auto n = static_cast<Eigen::Index>(config.tokens);
  const auto d = static_cast<Eigen::Index>(config.model_dim);
  FusionInstance inst;
  inst.working = rng.normal_matrix(n, d, 1.0);
  for (std::size_t i = 0; i < entries; ++i) {
    inst.episodes.push_back(
        {static_cast<int>(i + 1), static_cast<std::int64_t>(i + 1), rng.normal_matrix(n, d, 1.0)});
  }
  return inst;
}

Matrix synthetic_observation(const FusionConfig& config, SeededRng& rng) {
  config.check();
  // Enough patches across the views to cover the token budget with margin.
  const std::size_t needed = (config.tokens + config.views - 1) / config.views;
  std::size_t side = 2;
  while (side * side < needed + 1) ++side;
  const std::size_t width = side * config.patch_size;
  const std::size_t height = side * config.patch_size;

  std::vector<ViewObservation> views(config.views);
  for (auto& view : views) {
    view.width = width;
    view.height = height;
    view.camera.fx = static_cast<double>(width);
    view.camera.fy = static_cast<double>(width);
    view.camera.cx = 0.5 * static_cast<double>(width);
    view.camera.cy = 0.5 * static_cast<double>(height);
    const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
    view.camera.pose.topLeftCorner<3, 3>() =
        Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()).toRotationMatrix();
    view.camera.pose.topRightCorner<3, 1>() =
        Eigen::Vector3d(rng.uniform(-3, 3), rng.uniform(0.5, 2.0), rng.uniform(-3, 3));

    const double tilt = rng.uniform(0.0, 0.5);
    const double base = rng.uniform(1.5, 4.0);
    view.depth.resize(width * height);
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const double fx = static_cast<double>(x) / static_cast<double>(width);
        const double fy = static_cast<double>(y) / static_cast<double>(height);
        view.depth[y * width + x] = base + tilt * fy + 0.2 * std::sin(std::numbers::pi * fx);
      }
    }
    view.patch_features = rng.normal_matrix(static_cast<Eigen::Index>(side * side),
                                            static_cast<Eigen::Index>(config.model_dim), 0.5);
  }
  const PatchGrid grid = build_patch_grid(views, config.patch_size);
  return encode_observation(grid, config).tokens;
}

}  // namespace memsim
