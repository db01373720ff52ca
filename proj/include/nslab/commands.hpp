#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nslab/scenario.hpp"

namespace nslab {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitRuntime = 3 };

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CommandOutcome {
  int exit_code = kExitPass;
  nlohmann::ordered_json report;
  std::vector<CheckResult> checks;
};

/// True when the scenario enables `check` (an empty list enables everything).
bool check_enabled(const Scenario& s, const std::string& check);

// Each command writes its files plus report.json into scenario.output_dir.
// Module errors propagate as exceptions; run_command() maps them to exit codes.
CommandOutcome cmd_profile(const Scenario& s);
CommandOutcome cmd_simulate(const Scenario& s);
CommandOutcome cmd_probe(const Scenario& s);
/// Members run concurrently, one scenario per task.
CommandOutcome cmd_sweep(const Scenario& s);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);
/// Machine-readable description of an exception.
nlohmann::ordered_json error_json(const std::exception& e);

/// Runs `command` (profile | simulate | probe | sweep), catching module
/// errors: error.json is written to the output directory when possible.
CommandOutcome run_command(const std::string& command, const Scenario& s);

}  // namespace nslab
