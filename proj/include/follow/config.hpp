#ifndef FOLLOW_CONFIG_HPP
#define FOLLOW_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "follow/simworld.hpp"

namespace follow {

/// Any problem with a scenario file or preset; the message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Built-in scenarios: "circle-sim", "indoor", "outdoor".
std::vector<std::string> preset_names();
ScenarioConfig preset(std::string_view name);  // throws ConfigError for unknown names

/// Parses JSON text. Sections overlay the defaults, or the preset named by a
/// top-level "preset" key. Unknown keys are rejected.
ScenarioConfig parse_config_text(std::string_view text);

ScenarioConfig parse_config(const std::filesystem::path& path);

/// A preset name or a path to a JSON scenario file.
ScenarioConfig load_scenario(std::string_view preset_or_path);

}  // namespace follow

#endif  // FOLLOW_CONFIG_HPP
