#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "nslab/dynamics.hpp"
#include "nslab/functionals.hpp"

namespace nslab {

struct SimConfig {
  ModelParams model;
  double v_plus = 1.0;
  double u_plus = 0.0;
  double delta_v = 0.1;

  double x_min = -400.0;
  double x_max = 400.0;
  std::size_t n_cells = 8192;
  double cfl = 0.5;
  double t_end = 200.0;
  /// Steps between diagnostics ticks. The step count is rounded up to a
  /// multiple of this, and refinement keeps it, so ticks get denser with dt.
  std::size_t output_every = 20;
  /// Time between snapshot files; 0 writes only the initial and final state.
  double snapshot_interval = 0.0;

  PerturbationSpec perturbation;
  std::uint64_t seed = 0;
  ProfileOptions profile;
  /// Grid level: n_cells and the step count are both multiplied by 2^refine.
  int refine = 0;

  /// Throws UsageError naming the first violated constraint.
  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  SimState final_state;
  SimGrid grid;
  EndStates ends;
  ShockConstants constants;
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t steps_done = 0;
  double epsilon_report = 0.0;
  double max_conservation_residual = 0.0;
  double max_abs_x_dot = 0.0;
  double max_x_dot_mismatch = 0.0;  ///< |X' (stepper) - X' (ledger)| over ticks
  double v_min = 0.0;
  double v_max = 0.0;
  std::string status = "ok";
  std::string error;
};

/// Step count and dt for a config: the level-0 CFL step fixes the count,
/// which is then rounded up to a multiple of output_every and scaled by 2^refine.
struct TimeGrid {
  std::size_t n_steps = 0;
  double dt = 0.0;
};
TimeGrid time_grid(const SimConfig& config, const ShockProfile& profile);

/// Runs the scenario to t_end. When out_dir is non-empty, writes
/// diagnostics.csv, snapshots/ and metadata.json there. On a vacuum or solver
/// failure the partial history is written (status recorded in the metadata)
/// and the exception is rethrown.
RunResult run(const SimConfig& config, const std::filesystem::path& out_dir = {},
              std::shared_ptr<const ShockProfile> profile = nullptr);

}  // namespace nslab
