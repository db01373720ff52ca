#include "nslab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "nslab/errors.hpp"
#include "nslab/scenario.hpp"

namespace nslab {

namespace fs = std::filesystem;

void SimConfig::validate() const {
  model.validate();
  if (!(v_plus > 0.0)) throw UsageError("v_plus must be positive");
  if (!(delta_v > 0.0 && delta_v < v_plus)) throw UsageError("delta_v must lie in (0, v_plus)");
  if (!(x_max > x_min)) throw UsageError("x_max must exceed x_min");
  if (n_cells < 16) throw UsageError("n_cells must be at least 16");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw UsageError("cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw UsageError("t_end must be positive");
  if (output_every == 0) throw UsageError("output_every must be at least 1");
  if (!(snapshot_interval >= 0.0)) throw UsageError("snapshot_interval must be nonnegative");
  if (refine < 0 || refine > 8) throw UsageError("refine must lie in [0, 8]");
  if (perturbation.shape != PerturbationShape::zero && !(perturbation.width > 0.0)) {
    throw UsageError("perturbation width must be positive");
  }
}

namespace {

SimGrid level_grid(const SimConfig& c, int level) {
  return SimGrid::uniform(c.x_min, c.x_max, c.n_cells << level);
}

void write_snapshot(const fs::path& file, const SimState& s, const SimGrid& g,
                    const ShockProfile& profile) {
  const ShiftedProfile sh = shifted_eval(profile, g.x, s.X);
  std::ofstream os(file);
  if (!os) throw UsageError("cannot write " + file.string());
  os << "x,v,u,v_tilde_X,u_tilde_X\n";
  char buf[160];
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.x[i], s.v[i], s.u[i],
                  sh.v[i], sh.u[i]);
    os << buf;
  }
}

struct SnapshotEntry {
  std::string file;
  double t;
};

void write_outputs(const fs::path& dir, const SimConfig& c, const RunResult& r,
                   const std::vector<SnapshotEntry>& snaps) {
  {
    std::ofstream os(dir / "diagnostics.csv");
    if (!os) throw UsageError("cannot write " + (dir / "diagnostics.csv").string());
    os << diagnostics_csv_header() << '\n';
    for (const auto& rec : r.records) os << diagnostics_csv_row(rec) << '\n';
  }
  nlohmann::ordered_json meta;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : config_entries(c)) cfg[k] = v;
  meta["config"] = cfg;
  meta["grid"] = {{"x_min", r.grid.x_min},
                  {"x_max", r.grid.x_max},
                  {"n_cells", r.grid.n_cells},
                  {"dx", r.grid.dx}};
  meta["time"] = {{"dt", r.dt}, {"n_steps", r.n_steps}, {"steps_done", r.steps_done}};
  meta["end_states"] = {{"v_minus", r.ends.v_minus}, {"v_plus", r.ends.v_plus},
                        {"u_minus", r.ends.u_minus}, {"u_plus", r.ends.u_plus},
                        {"sigma", r.ends.sigma},     {"delta", r.ends.delta}};
  meta["constants"] = {{"sigma_ell", r.constants.sigma_ell},
                       {"alpha_ell", r.constants.alpha_ell},
                       {"c_star", r.constants.c_star},
                       {"m_shift", r.constants.m_shift}};
  meta["epsilon_report"] = r.epsilon_report;
  meta["max_conservation_residual"] = r.max_conservation_residual;
  meta["max_abs_x_dot"] = r.max_abs_x_dot;
  meta["max_x_dot_mismatch"] = r.max_x_dot_mismatch;
  meta["v_range"] = {r.v_min, r.v_max};
  nlohmann::ordered_json sj = nlohmann::ordered_json::array();
  for (const auto& s : snaps) sj.push_back({{"file", s.file}, {"t", s.t}});
  meta["snapshots"] = sj;
  meta["status"] = r.status;
  if (!r.error.empty()) meta["error"] = r.error;
  std::ofstream os(dir / "metadata.json");
  os << meta.dump(2) << '\n';
}

}  // namespace

TimeGrid time_grid(const SimConfig& c, const ShockProfile& profile) {
  const SimGrid g0 = level_grid(c, 0);
  const InitialData id0 = initial_data(profile, c.perturbation, g0);
  const double dt0 = cfl_dt(id0.state, g0, c.model, profile.ends.sigma, c.cfl);
  std::size_t n0 = static_cast<std::size_t>(std::ceil(c.t_end / dt0));
  n0 = (n0 + c.output_every - 1) / c.output_every * c.output_every;
  TimeGrid tg;
  tg.n_steps = n0 << c.refine;
  tg.dt = c.t_end / static_cast<double>(tg.n_steps);
  return tg;
}

RunResult run(const SimConfig& c, const fs::path& out_dir,
              std::shared_ptr<const ShockProfile> profile) {
  c.validate();
  const EndStates ends = left_state_from_right(c.model, c.v_plus, c.u_plus, c.delta_v);
  if (!profile) profile = std::make_shared<const ShockProfile>(solve_profile(c.model, ends, c.profile));

  RunResult r;
  r.ends = profile->ends;
  r.constants = profile->constants;
  r.grid = level_grid(c, c.refine);
  const TimeGrid tg = time_grid(c, *profile);
  r.n_steps = tg.n_steps;
  r.dt = tg.dt;

  const bool write = !out_dir.empty();
  std::vector<SnapshotEntry> snaps;
  if (write) fs::create_directories(out_dir / "snapshots");
  auto snapshot = [&](const SimState& s) {
    if (!write) return;
    char name[64];
    std::snprintf(name, sizeof name, "snapshots/snapshot_%04zu.csv", snaps.size());
    write_snapshot(out_dir / name, s, r.grid, *profile);
    snaps.push_back({name, s.t});
  };

  const InitialData id = initial_data(*profile, c.perturbation, r.grid);
  r.epsilon_report = id.epsilon_report;
  SimState s = id.state;
  r.v_min = *std::min_element(s.v.begin(), s.v.end());
  r.v_max = *std::max_element(s.v.begin(), s.v.end());

  const std::size_t tick = c.output_every;
  const std::size_t snap_every =
      c.snapshot_interval > 0.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.snapshot_interval / r.dt)))
          : 0;
  auto record = [&]() {
    DiagnosticsRecord rec = ledger(s, *profile, r.grid);
    r.max_x_dot_mismatch = std::max(r.max_x_dot_mismatch, std::abs(rec.X_dot - rec.x_dot_recomputed));
    r.records.push_back(rec);
  };

  try {
    const FrameStepper stepper(profile, r.grid);
    record();
    snapshot(s);
    r.max_abs_x_dot = std::abs(s.X_dot);
    for (std::size_t k = 1; k <= r.n_steps; ++k) {
      const StepReport rep = stepper.advance(s, r.dt);
      if (k == r.n_steps) s.t = c.t_end;
      r.steps_done = k;
      r.max_conservation_residual = std::max(r.max_conservation_residual, rep.conservation_residual());
      r.max_abs_x_dot = std::max(r.max_abs_x_dot, std::abs(s.X_dot));
      for (std::size_t i = 0; i < s.v.size(); ++i) {
        r.v_min = std::min(r.v_min, s.v[i]);
        r.v_max = std::max(r.v_max, s.v[i]);
      }
      if (k % tick == 0) record();
      if ((snap_every && k % snap_every == 0 && k != r.n_steps) || k == r.n_steps) snapshot(s);
    }
  } catch (const VacuumError& e) {
    r.status = "vacuum";
    r.error = e.what();
  } catch (const SolverFailure& e) {
    r.status = "solver_failure";
    r.error = e.what();
  }
  r.final_state = s;
  finalize_history(r.records, r.ends.delta);
  if (write) write_outputs(out_dir, c, r, snaps);
  if (r.status == "vacuum") throw VacuumError(r.error);
  if (r.status == "solver_failure") throw SolverFailure(r.error);
  return r;
}

}  // namespace nslab
