#include <algorithm>
#include <cmath>
#include <map>

#include "memsim/error.hpp"
#include "memsim/memory.hpp"

namespace memsim {

namespace {

Matrix silu_derivative(const Matrix& h) {
  return h.unaryExpr([](double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
  });
}

ProjectionParams zeros_like(const ProjectionParams& p) {
  ProjectionParams g = p;
  for_each_parameter(g, [](const char*, auto& t) { t.setZero(); });
  return g;
}

// Forward intermediates for one surviving bank entry.
struct EntryCache {
  const Matrix* observation = nullptr;
  Matrix pre;     // mlp_in output
  Matrix act;     // after the nonlinearity
  Matrix hidden;  // mlp_out output, input to key/value heads
  Eigen::Index row_offset = 0;
  Eigen::Index rows = 0;
  bool latest = false;
};


using XMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using XRow = Eigen::Matrix<long double, 1, Eigen::Dynamic>;

XMatrix affine_x(const XMatrix& x, const Affine& a) {
  const XMatrix w = a.weight.cast<long double>();
  const XRow b = a.bias.cast<long double>().transpose();
  return (x * w.transpose()).rowwise() + b;
}

// fusion_loss in 80-bit arithmetic, so the finite differences below are not
// dominated by double rounding when a gradient is zero or tiny.
long double extended_loss(const FusionInstance& instance, const ProjectionParams& p,
                          const FusionConfig& config) {
  const MemoryBank bank = build_bank(instance, p, config);  // validates the instance
  std::map<int, const Episode*> source;
  for (const auto& ep : instance.episodes) source[ep.room] = &ep;

  struct KV {
    XMatrix key, value;
  };
  std::vector<KV> rows;
  XMatrix newest_key;
  for (const auto* e : bank.chronological()) {
    XMatrix h = affine_x(source.at(e->room)->observation.cast<long double>(), p.mlp_in);
    if (p.activation == Activation::Silu) {
      h = h.unaryExpr([](long double v) { return v / (1.0L + std::exp(-v)); });
    }
    const XMatrix z = affine_x(h, p.mlp_out);
    KV kv{affine_x(z, p.key), affine_x(z, p.value)};
    if (config.time_embedding) {
      const XRow te = time_embed(e->t, config.memory_dim, config.time_embed_base).cast<long double>().transpose();
      kv.key.rowwise() += te;
      kv.value.rowwise() += te;
    }
    newest_key = kv.key;
    rows.push_back(std::move(kv));
  }

  const auto n = instance.working.rows();
  const auto m = static_cast<Eigen::Index>(config.memory_dim);
  XMatrix q = XMatrix::Zero(n, m);
  if (config.query_init == QueryInit::WorkingMemory) q = affine_x(instance.working.cast<long double>(), p.query);
  if (config.query_init == QueryInit::MostRecentEpisodic) q = newest_key;

  const long double inv = 1.0L / std::sqrt(static_cast<long double>(config.effective_scale()));
  long double total = q.sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<long double> logits;
    for (const auto& kv : rows) {
      for (Eigen::Index r = 0; r < kv.key.rows(); ++r) logits.push_back(q.row(i).dot(kv.key.row(r)) * inv);
    }
    const long double peak = *std::max_element(logits.begin(), logits.end());
    long double norm = 0.0L;
    for (auto& l : logits) norm += (l = std::exp(l - peak));
    std::size_t idx = 0;
    for (const auto& kv : rows) {
      for (Eigen::Index r = 0; r < kv.value.rows(); ++r) total += logits[idx++] / norm * kv.value.row(r).sum();
    }
  }
  return total;
}

}  // namespace

ProjectionParams fusion_loss_gradient(const FusionInstance& instance,
                                      const ProjectionParams& params,
                                      const FusionConfig& config) {
  const MemoryBank bank = build_bank(instance, params, config);
  const FusionResult fwd = fuse(instance.working, bank, params, config);

  // Each bank entry comes from the last episode committed for its room.
  std::map<int, const Episode*> source;
  for (const auto& ep : instance.episodes) source[ep.room] = &ep;

  const auto entries = bank.chronological();
  const MemoryEntry& newest = bank.latest();
  std::vector<EntryCache> caches;
  Eigen::Index offset = 0;
  for (const auto* e : entries) {
    EntryCache c;
    c.observation = &source.at(e->room)->observation;
    c.pre = params.mlp_in.apply(*c.observation);
    c.act = params.activation == Activation::Silu
                ? Matrix(c.pre.unaryExpr([](double x) { return x / (1.0 + std::exp(-x)); }))
                : c.pre;
    c.hidden = params.mlp_out.apply(c.act);
    c.row_offset = offset;
    c.rows = e->key.rows();
    c.latest = (e == &newest);
    offset += c.rows;
    caches.push_back(std::move(c));
  }

  const auto m = static_cast<Eigen::Index>(config.memory_dim);
  Matrix keys(offset, m);
  Matrix values(offset, m);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    keys.middleRows(caches[i].row_offset, caches[i].rows) = entries[i]->key;
    values.middleRows(caches[i].row_offset, caches[i].rows) = entries[i]->value;
  }

  const Matrix& q = fwd.query;
  const Matrix& attn = fwd.attention;
  const double inv_sqrt_c = 1.0 / std::sqrt(config.effective_scale());

  // d(loss)/d(read-out) and d(loss)/d(query) from the concatenation are all ones.
  const Matrix d_read = Matrix::Ones(q.rows(), m);
  Matrix d_query = Matrix::Ones(q.rows(), m);

  const Matrix d_attn = d_read * values.transpose();
  const Matrix d_values = attn.transpose() * d_read;
  const Eigen::VectorXd row_dot = (attn.array() * d_attn.array()).rowwise().sum();
  const Matrix d_logits = (attn.array() * (d_attn.colwise() - row_dot).array()).matrix();
  d_query += inv_sqrt_c * d_logits * keys;
  Matrix d_keys = inv_sqrt_c * d_logits.transpose() * q;

  ProjectionParams grad = zeros_like(params);
  switch (config.query_init) {
    case QueryInit::WorkingMemory:
      grad.query.weight = d_query.transpose() * instance.working;
      grad.query.bias = d_query.colwise().sum().transpose();
      break;
    case QueryInit::MostRecentEpisodic:
      for (const auto& c : caches) {
        if (c.latest) d_keys.middleRows(c.row_offset, c.rows) += d_query;
      }
      break;
    case QueryInit::Zeros:
      break;
  }

  for (const auto& c : caches) {
    const Matrix dk = d_keys.middleRows(c.row_offset, c.rows);
    const Matrix dv = d_values.middleRows(c.row_offset, c.rows);
    grad.key.weight += dk.transpose() * c.hidden;
    grad.key.bias += dk.colwise().sum().transpose();
    grad.value.weight += dv.transpose() * c.hidden;
    grad.value.bias += dv.colwise().sum().transpose();

    const Matrix d_hidden = dk * params.key.weight + dv * params.value.weight;
    grad.mlp_out.weight += d_hidden.transpose() * c.act;
    grad.mlp_out.bias += d_hidden.colwise().sum().transpose();

    Matrix d_pre = d_hidden * params.mlp_out.weight;
    if (params.activation == Activation::Silu) {
      d_pre = (d_pre.array() * silu_derivative(c.pre).array()).matrix();
    }
    grad.mlp_in.weight += d_pre.transpose() * (*c.observation);
    grad.mlp_in.bias += d_pre.colwise().sum().transpose();
  }
  return grad;
}

GradCheckResult grad_check(const FusionInstance& instance, const ProjectionParams& params,
                           const FusionConfig& config, double step) {
  if (!(step > 0.0)) throw InputError("grad_check: step must be positive");
  const ProjectionParams analytic = fusion_loss_gradient(instance, params, config);

  // Flatten the analytic gradient in visiting order.
  std::vector<std::vector<double>> flat;
  for_each_parameter(analytic, [&](const char*, const auto& t) {
    flat.emplace_back(t.data(), t.data() + t.size());
  });

  GradCheckResult result;
  ProjectionParams probe = params;
  std::size_t group = 0;
  for_each_parameter(probe, [&](const char* name, auto& t) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double saved = t.data()[i];
      const double hi = saved + step, lo = saved - step;
      t.data()[i] = hi;
      const long double up = extended_loss(instance, probe, config);
      t.data()[i] = lo;
      const long double down = extended_loss(instance, probe, config);
      t.data()[i] = saved;

      const auto numeric = static_cast<double>((up - down) / (static_cast<long double>(hi) - lo));
      const double a = flat[group][static_cast<std::size_t>(i)];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
    result.group_max_rel_error[name] = worst;
    if (worst >= result.max_rel_error) {
      result.max_rel_error = worst;
      result.worst_group = name;
    }
    ++group;
  });
  return result;
}

}  // namespace memsim
