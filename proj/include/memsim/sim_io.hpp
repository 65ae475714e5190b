#pragma once

#include <json.hpp>

#include "memsim/sim.hpp"

namespace memsim {

nlohmann::json object_key_to_json(const ObjectKey& key);
ObjectKey object_key_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const SimState& state);
SimState state_from_json(const nlohmann::json& j);

// {"valid", "verdicts": [{"index", "valid", "error_kind", "warning"?}], "final_state"}
nlohmann::json report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const nlohmann::json& j);

nlohmann::json diff_to_json(const PlacementDiff& diff);

}  // namespace memsim
