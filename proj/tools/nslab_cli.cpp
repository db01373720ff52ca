// nslab: profile | simulate | probe | sweep --config <path> [--out <dir>]
//        [--seed <u64>] [--refine <k>]
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage, 3 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "nslab/commands.hpp"
#include "nslab/errors.hpp"

namespace {

std::string key_help() {
  std::string s = "Config keys (key = value, '#' comments; NSLAB_<KEY> env vars override):\n";
  for (const auto& k : nslab::config_keys()) {
    std::string line = "  " + std::string(k.key);
    line.resize(22, ' ');
    line += std::string("[") + (k.fallback[0] ? k.fallback : "-") + "] " + k.help + "\n";
    s += line;
  }
  s += "Checks: ";
  for (const auto& c : nslab::known_checks()) s += c + " ";
  s += "\nExit codes: 0 pass, 1 check failure, 2 usage, 3 runtime failure\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous shock stability laboratory"};
  app.require_subcommand(1);
  app.footer(key_help());

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> refine;

  const std::pair<const char*, const char*> commands[] = {
      {"profile", "solve the traveling wave, write profile.csv, check it and the weight"},
      {"simulate", "evolve a perturbed shock and record the diagnostics ledger"},
      {"probe", "randomized checks of the algebraic identities and bounds"},
      {"sweep", "simulate once per sweep_delta strength, concurrently"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario file")->required();
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "seed for randomized probes");
    sub->add_option("--refine", refine, "grid refinement level")->check(CLI::Range(0, 8));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nslab::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  nslab::Scenario scenario;
  try {
    scenario = nslab::parse_config(config);
  } catch (const std::exception& e) {
    std::cerr << nslab::error_json(e).dump() << '\n';
    return nslab::exit_code_for(e);
  }
  if (!out.empty()) scenario.output_dir = out;
  if (seed) scenario.config.seed = *seed;
  if (refine) scenario.config.refine = *refine;

  const nslab::CommandOutcome r = nslab::run_command(command, scenario);
  if (r.report.contains("error")) {
    std::cerr << r.report.dump() << '\n';
    return r.exit_code;
  }
  for (const auto& c : r.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << c.value
              << "  threshold=" << c.threshold << "  (" << c.detail << ")\n";
  }
  std::cout << command << ": " << (r.exit_code == nslab::kExitPass ? "pass" : "fail")
            << " -> " << scenario.output_dir.string() << '\n';
  return r.exit_code;
}
