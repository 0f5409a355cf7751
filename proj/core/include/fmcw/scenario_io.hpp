#pragma once

#include <string>

#include "fmcw/scenario.hpp"

namespace fmcw {

// Human-editable scenario files (JSON, one section per model type).
std::string scenario_to_json(const RadarScenario& scenario);
RadarScenario scenario_from_json(const std::string& text);

void save_scenario(const RadarScenario& scenario, const std::string& path);
RadarScenario load_scenario(const std::string& path);

// Resolves "table1"/"table2"/"table3" to the built-in presets, anything else
// as a file path.
RadarScenario resolve_scenario(const std::string& name_or_path);

} // namespace fmcw
