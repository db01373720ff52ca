#pragma once

// Flat `key = value` scenario files. `#` starts a comment; blank lines are
// ignored. `gamma` is required, every other key has a default (see
// config_keys()). Environment variables NSLAB_<KEY> (key upper-cased) override
// file values.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nslab/simulation.hpp"

namespace nslab {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kEnvPrefix = "NSLAB_";

struct Scenario {
  std::string name = "default";
  SimConfig config;
  /// Enabled checks; empty means every check that applies to the command.
  std::vector<std::string> checks;
  std::filesystem::path output_dir = "out";
  /// Shock strengths for `sweep`; each member gets delta_v from the inverse
  /// of the shock curve.
  std::vector<double> sweep_delta;

  bool operator==(const Scenario&) const = default;
};

struct KeyDoc {
  const char* key;
  const char* fallback;  ///< default as text ("required" for gamma)
  const char* help;
};
const std::vector<KeyDoc>& config_keys();

/// Names accepted in the `checks` list.
const std::vector<std::string>& known_checks();

/// Parses scenario text. Overrides are applied after the file contents.
/// Throws ConfigError with the line and key of the offending entry.
Scenario parse_scenario(std::string_view text, const KeyValues& overrides = {},
                        const std::string& source = "<text>");

/// Reads a file, applying NSLAB_* environment overrides when use_env is set.
Scenario parse_config(const std::filesystem::path& path, bool use_env = true);

/// NSLAB_<KEY> variables from the process environment, keys lower-cased.
KeyValues env_overrides();

/// Every key with its current value, in config_keys() order.
KeyValues scenario_entries(const Scenario& s);
KeyValues config_entries(const SimConfig& c);

/// Text that parses back to an identical Scenario.
std::string emit_scenario(const Scenario& s);

/// One scenario per sweep_delta value, named <name>_d<k>, writing to
/// output_dir/<member name>.
std::vector<Scenario> expand_sweep(const Scenario& s);

}  // namespace nslab
