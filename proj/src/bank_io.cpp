#include "memsim/bank_io.hpp"

#include "memsim/error.hpp"
#include "memsim/json_util.hpp"

namespace memsim {

using nlohmann::json;

std::string matrix_to_text(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_double17(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

std::string vector_to_text(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double17(v(i));
  }
  return out + "]";
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError(std::string(what) + ": rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw InputError(std::string(what) + ": ragged row " + std::to_string(i));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = require_number(j[i][c], what);
    }
  }
  return m;
}

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = require_number(j[i], what);
  return v;
}

std::string bank_to_text(const MemoryBank& bank) {
  std::string out = "{\n  \"clock\": " + std::to_string(bank.clock) + ",\n  \"entries\": [";
  bool first = true;
  for (const auto& [room, e] : bank.entries) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"room\": " + std::to_string(room) + ", \"t\": " + std::to_string(e.t) +
           ",\n     \"key\": " + matrix_to_text(e.key) + ",\n     \"value\": " +
           matrix_to_text(e.value) + "}";
  }
  out += first ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

MemoryBank bank_from_json(const json& doc) {
  MemoryBank bank;
  const auto& clock = require(doc, "clock");
  if (!clock.is_number_integer()) throw InputError("bank: 'clock' must be an integer");
  bank.clock = clock.get<std::int64_t>();
  std::int64_t max_t = 0;
  for (const auto& ej : require(doc, "entries")) {
    MemoryEntry e;
    e.room = require_int(ej, "room");
    const auto& t = require(ej, "t");
    if (!t.is_number_integer() || t.get<std::int64_t>() < 1) {
      throw InputError("bank: entry 't' must be a positive integer");
    }
    e.t = t.get<std::int64_t>();
    e.key = matrix_from_json(require(ej, "key"), "bank key");
    e.value = matrix_from_json(require(ej, "value"), "bank value");
    if (e.key.rows() != e.value.rows() || e.key.cols() != e.value.cols()) {
      throw InputError("bank: key/value shape mismatch for room " + std::to_string(e.room));
    }
    max_t = std::max(max_t, e.t);
    if (!bank.entries.emplace(e.room, std::move(e)).second) {
      throw InputError("bank: more than one entry for a room");
    }
  }
  if (!bank.entries.empty() && bank.clock != max_t) {
    throw InputError("bank: clock must equal the newest entry timestep");
  }
  return bank;
}

MemoryBank load_bank(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    return bank_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string params_to_text(const ProjectionParams& params) {
  std::string out = "{\n  \"activation\": \"" + std::string(to_string(params.activation)) + "\"";
  auto layer = [&out](const char* name, const Affine& a) {
    out += ",\n  \"" + std::string(name) + "\": {\"weight\": " + matrix_to_text(a.weight) +
           ", \"bias\": " + vector_to_text(a.bias) + "}";
  };
  layer("mlp_in", params.mlp_in);
  layer("mlp_out", params.mlp_out);
  layer("key", params.key);
  layer("value", params.value);
  layer("query", params.query);
  return out + "\n}\n";
}

ProjectionParams params_from_json(const json& doc) {
  auto layer = [&doc](const char* name) {
    const auto& lj = require(doc, name);
    return Affine{matrix_from_json(require(lj, "weight"), name),
                  vector_from_json(require(lj, "bias"), name)};
  };
  ProjectionParams p;
  p.activation = activation_from_string(doc.value("activation", std::string("silu")));
  p.mlp_in = layer("mlp_in");
  p.mlp_out = layer("mlp_out");
  p.key = layer("key");
  p.value = layer("value");
  p.query = layer("query");
  return p;
}

Matrix working_from_json(const json& doc) {
  if (doc.is_object()) return matrix_from_json(require(doc, "working"), "working memory");
  return matrix_from_json(doc, "working memory");
}

}  // namespace memsim
