#pragma once

#include <string>

#include <json.hpp>

#include "memsim/memory.hpp"

namespace memsim {

// Rows as nested arrays, every number printed with 17 significant digits.
std::string matrix_to_text(const Matrix& m);
std::string vector_to_text(const Vector& v);
Matrix matrix_from_json(const nlohmann::json& j, const char* what);
Vector vector_from_json(const nlohmann::json& j, const char* what);

// {"clock": T, "entries": [{"room", "t", "key": [[...]], "value": [[...]]}]}
std::string bank_to_text(const MemoryBank& bank);
MemoryBank bank_from_json(const nlohmann::json& doc);
MemoryBank load_bank(const std::string& path);

// {"activation", "mlp_in": {"weight", "bias"}, "mlp_out", "key", "value", "query"}
std::string params_to_text(const ProjectionParams& params);
ProjectionParams params_from_json(const nlohmann::json& doc);

// Working-memory file: {"working": [[...], ...]} or a bare array of rows.
Matrix working_from_json(const nlohmann::json& doc);

}  // namespace memsim
