#pragma once

#include <cstdint>
#include <string>

#include "advscen/types.hpp"

namespace advscen {

inline constexpr int kScenarioSchemaVersion = 1;

/// Parses and validates a scenario file (JSON, schema v1 — see README).
/// Throws ParseError naming the offending field, or ValidationError when the
/// parsed scenario violates an invariant.
Scenario load_scenario(const std::string& path);

void save_scenario(const std::string& path, const Scenario& s);

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

/// Content hash over the canonical JSON form (cache keys, record headers).
std::uint64_t scenario_hash(const Scenario& s);

}  // namespace advscen
