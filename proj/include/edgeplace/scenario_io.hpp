#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "edgeplace/types.hpp"

namespace edgeplace {

// Parse + validate a scenario document. Parse failures throw
// Error(ParseError) naming the offending field path; semantic failures
// propagate from validate() with the path in the message.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);      // Error(IoError) on I/O
Scenario parse_scenario(const std::string& text);     // from a JSON string

nlohmann::json scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace edgeplace
