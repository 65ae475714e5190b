#pragma once

#include <string>

#include <json.hpp>

namespace memsim {

// Reads and parses a JSON file. I/O and syntax problems become InputError
// naming the file (and byte offset for syntax errors).
nlohmann::json read_json_file(const std::string& path);

// Writes `text` to `path`, throwing InputError on failure.
void write_text_file(const std::string& path, const std::string& text);

// Typed field access with InputError on missing or mistyped fields.
const nlohmann::json& require(const nlohmann::json& obj, const char* key);
int require_int(const nlohmann::json& obj, const char* key);
double require_number(const nlohmann::json& v, const char* what);

// Decimal rendering with 17 significant digits (bit-faithful for doubles).
std::string format_double17(double v);

}  // namespace memsim
