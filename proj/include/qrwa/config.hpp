#pragma once

#include <stdexcept>
#include <string>

#include "qrwa/simulation.hpp"

namespace qrwa {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the INI-style scenario config (grammar documented in README.md):
// `[section]` headers, `key = value` lines, `#`/`;` comments.  Every key of
// the schema is required; unknown sections or keys are hard errors.  All
// diagnostics carry line numbers.
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);

}  // namespace qrwa
