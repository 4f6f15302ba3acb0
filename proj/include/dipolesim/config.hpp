#pragma once

#include <string>
#include <vector>

#include "dipolesim/scenarios.hpp"

namespace dipolesim {

// JSON config contract. A file names a preset and overrides any subset of its
// parameters; unknown keys are rejected naming the offending field. Units are
// part of the schema: rates in Γ₀, lengths in λ₀, times in 1/Γ₀, angles in
// radians. `overrides` entries look like "drive.rabi=2.0" (the value side is
// parsed as JSON, so numbers, strings, and arrays all work).
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides = {});
ScenarioConfig parse_config_file(const std::string& path,
                                 const std::vector<std::string>& overrides = {});

// Canonical full-form JSON (every field explicit, keys in schema order,
// shortest round-trip number formatting). parse_config_text(serialize_config(c))
// reproduces c exactly.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace dipolesim
