#include "nslab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <random>

#include "nslab/errors.hpp"
#include "nslab/hugoniot.hpp"

namespace nslab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Tolerances of the command-level checks.
constexpr double kRhTol = 1e-12;
constexpr double kWeightTol = 1e-10;
constexpr double kTailR2 = 0.999;
constexpr double kConservationTol = 1e-12;
constexpr double kXdotTol = 1e-12;
constexpr double kYSplitTol = 1e-12;
constexpr double kContractionSlack = 1e-3;
constexpr double kIdentityRelTol = 0.05;
// Floor for the identity denominator: below this every term is round-off and
// a ratio of two round-off numbers says nothing.
constexpr double kIdentityScaleFloor = 1e-13;
constexpr double kDecayFactor = 0.5;
constexpr double kXdotDecay = 0.1;
constexpr double kSquareTol = 1e-12;
constexpr double kLeadingCoefTol = 0.05;
constexpr double kLeadingCoefOffset = 1e-3;
constexpr double kPoincareAffineTol = 1e-6;
constexpr double kIdentityAlphaTol = 1e-12;

json check_json(const CheckResult& c) {
  return {{"name", c.name}, {"pass", c.passed}, {"value", c.value},
          {"threshold", c.threshold}, {"detail", c.detail}};
}

void add(CommandOutcome& out, const Scenario& s, const std::string& group, CheckResult c) {
  if (!check_enabled(s, group)) return;
  out.checks.push_back(std::move(c));
}

void finish(CommandOutcome& out, const std::string& command, const Scenario& s) {
  bool all = true;
  json arr = json::array();
  for (const auto& c : out.checks) {
    all = all && c.passed;
    arr.push_back(check_json(c));
  }
  out.report["command"] = command;
  out.report["scenario"] = s.name;
  out.report["checks"] = arr;
  out.report["pass"] = all;
  if (out.exit_code == kExitPass && !all) out.exit_code = kExitCheckFailed;
  fs::create_directories(s.output_dir);
  std::ofstream os(s.output_dir / "report.json");
  os << out.report.dump(2) << '\n';
}

const DiagnosticsRecord& nearest(const std::vector<DiagnosticsRecord>& h, double t) {
  return *std::min_element(h.begin(), h.end(), [t](const auto& a, const auto& b) {
    return std::abs(a.t - t) < std::abs(b.t - t);
  });
}

}  // namespace

bool check_enabled(const Scenario& s, const std::string& check) {
  return s.checks.empty() || std::find(s.checks.begin(), s.checks.end(), check) != s.checks.end();
}

CommandOutcome cmd_profile(const Scenario& s) {
  const SimConfig& c = s.config;
  const EndStates e = left_state_from_right(c.model, c.v_plus, c.u_plus, c.delta_v);
  const auto t0 = std::chrono::steady_clock::now();
  const ShockProfile p = solve_profile(c.model, e, c.profile);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(s.output_dir);
  {
    std::ofstream os(s.output_dir / "profile.csv");
    write_profile_csv(os, p);
  }

  CommandOutcome out;
  std::size_t bad_mono = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p.v_tilde_x[i] > 0.0) || !(p.u_tilde_x[i] < 0.0)) ++bad_mono;
  }
  const double rh = rh_residual(c.model, e).max_relative();
  const TailFit left = tail_fit(p, false);
  const TailFit right = tail_fit(p, true);
  const WeightFn w = build_weight(p);
  const double sd = std::sqrt(e.delta);
  double a_lo = 1e300, a_hi = -1e300, ax_err = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    a_lo = std::min(a_lo, w.a[i]);
    a_hi = std::max(a_hi, w.a[i]);
    ax_err = std::max(ax_err, std::abs(w.a_x[i] * sd - e.sigma * p.v_tilde_x[i]));
  }

  add(out, s, "profile", {"monotone", bad_mono == 0, double(bad_mono), 0.0,
                          "samples with v~' <= 0 or u~' >= 0"});
  add(out, s, "profile", {"rankine_hugoniot", rh <= kRhTol, rh, kRhTol, "max relative RH residual"});
  add(out, s, "profile", {"far_field_misfit", p.far_field_misfit() <= c.profile.misfit_tol,
                          p.far_field_misfit(), c.profile.misfit_tol, "|v~(+-L) - v+-|"});
  const double r2 = std::min(left.r_squared, right.r_squared);
  add(out, s, "profile", {"tail_log_linearity", r2 >= kTailR2, r2, kTailR2,
                          "R^2 of log|v~ - v+-| on the outer quarters"});
  add(out, s, "weight", {"weight_range", a_lo >= 1.0 && a_hi <= 1.0 + sd, a_hi - 1.0, sd,
                         "1 <= a <= 1 + sqrt(delta)"});
  add(out, s, "weight", {"weight_slope", ax_err <= kWeightTol, ax_err, kWeightTol,
                         "|a_x sqrt(delta) - sigma v~_x|"});

  out.report["end_states"] = {{"v_minus", e.v_minus}, {"v_plus", e.v_plus}, {"u_minus", e.u_minus},
                              {"u_plus", e.u_plus},   {"sigma", e.sigma},   {"delta", e.delta}};
  out.report["constants"] = {{"sigma_ell", p.constants.sigma_ell},
                             {"alpha_ell", p.constants.alpha_ell},
                             {"c_star", p.constants.c_star},
                             {"m_shift", p.constants.m_shift}};
  out.report["profile"] = {{"half_length", p.half_length},
                           {"samples", p.size()},
                           {"center_value", p.v_tilde[p.center_index()]},
                           {"misfit_left", p.misfit_left},
                           {"misfit_right", p.misfit_right},
                           {"tail_slope_left", left.slope},
                           {"tail_slope_right", right.slope},
                           {"seconds", seconds}};
  finish(out, "profile", s);
  return out;
}

CommandOutcome cmd_simulate(const Scenario& s) {
  const RunResult r = run(s.config, s.output_dir);
  const auto& h = r.records;
  CommandOutcome out;

  add(out, s, "conservation", {"conservation", r.max_conservation_residual <= kConservationTol,
                               r.max_conservation_residual, kConservationTol,
                               "per-step |mass change - boundary flux|"});

  bool finite = true, nonneg = true;
  double ysplit = 0.0;
  for (const auto& rec : h) {
    for (double v : {rec.weighted_rel_entropy, rec.G1, rec.GS, rec.Dv, rec.Du1, rec.Du2, rec.Y1,
                     rec.Y2, rec.Y3, rec.Y4, rec.B1, rec.B2, rec.B3, rec.B4, rec.B5, rec.B6,
                     rec.curlyG1, rec.curlyG2, rec.curlyD, rec.identity_residual, rec.h1_perturbation,
                     rec.apriori_ratio}) {
      finite = finite && std::isfinite(v);
    }
    for (double v : {rec.weighted_rel_entropy, rec.G1, rec.GS, rec.Dv, rec.Du1, rec.Du2,
                     rec.curlyG1, rec.curlyG2, rec.curlyD}) {
      nonneg = nonneg && v >= 0.0;
    }
    const double scale = std::abs(rec.Y1) + std::abs(rec.Y2) + std::abs(rec.Y3) + std::abs(rec.Y4);
    if (scale > 0.0) ysplit = std::max(ysplit, std::abs(rec.y_sum() - rec.y_direct) / scale);
  }
  add(out, s, "ledger", {"x_dot_consistency", r.max_x_dot_mismatch <= kXdotTol, r.max_x_dot_mismatch,
                         kXdotTol, "stepper X' against -(M/delta)(Y1 + Y2)"});
  add(out, s, "ledger", {"y_decomposition", ysplit <= kYSplitTol, ysplit, kYSplitTol,
                         "|Y1+Y2+Y3+Y4 - Y(U)| relative"});
  add(out, s, "ledger", {"finite_fields", finite, finite ? 0.0 : 1.0, 0.0, "every record field finite"});
  add(out, s, "ledger", {"good_terms_nonnegative", nonneg, nonneg ? 0.0 : 1.0, 0.0,
                         "aRE, G1, GS, D's, curly G's, curly D >= 0"});

  const double lo = r.ends.v_minus / 3.0, hi = 3.0 * r.ends.v_plus;
  add(out, s, "positivity", {"volume_barrier", r.v_min >= lo && r.v_max <= hi, r.v_min, lo,
                             "v stays in [v-/3, 3 v+]"});

  if (h.size() >= 3) {
    double res = 0.0, rate = 0.0;
    for (std::size_t k = 1; k + 1 < h.size(); ++k) {
      res = std::max(res, h[k].identity_residual);
      rate = std::max(rate, std::abs(h[k].X_dot * h[k].y_sum()) + std::abs(h[k].j_bad) +
                                std::abs(h[k].j_good));
    }
    const double rel = res / std::max(rate, kIdentityScaleFloor);
    add(out, s, "identity", {"energy_identity", rel <= kIdentityRelTol, rel, kIdentityRelTol,
                             "max residual relative to the largest right-hand side term"});
    out.report["identity_residual_max"] = res;
  }

  const double slack = contraction_slack(h);
  add(out, s, "contraction", {"contraction", slack <= kContractionSlack, slack, kContractionSlack,
                              "largest one-tick increase of int a eta / initial value"});

  if (!h.empty()) {
    const DiagnosticsRecord& first = h.front();
    const DiagnosticsRecord& last = h.back();
    const double sup0 = std::max(first.sup_norm_v, first.sup_norm_u);
    const double sup1 = std::max(last.sup_norm_v, last.sup_norm_u);
    add(out, s, "decay", {"sup_norm_decay", sup1 <= kDecayFactor * sup0, sup1, kDecayFactor * sup0,
                          "sup |U - U~^X| at t_end against half the initial value"});
    const double xd_max = r.max_abs_x_dot;
    add(out, s, "decay", {"shift_rate_decay", std::abs(last.X_dot) <= kXdotDecay * xd_max,
                          std::abs(last.X_dot), kXdotDecay * xd_max, "|X'(t_end)| against 0.1 max |X'|"});
    const DiagnosticsRecord& quarter = nearest(h, 0.25 * s.config.t_end);
    const double xr1 = std::abs(last.X) / last.t;
    const double xr0 = quarter.t > 0.0 ? std::abs(quarter.X) / quarter.t : 0.0;
    const bool still = xr1 <= 1e-14 && xr0 <= 1e-14;
    add(out, s, "decay", {"shift_sublinear", xr1 < xr0 || still, xr1, xr0,
                          "|X|/t at t_end against t_end/4"});
  }

  out.report["run"] = {{"dt", r.dt},
                       {"n_steps", r.n_steps},
                       {"n_cells", r.grid.n_cells},
                       {"ticks", h.size()},
                       {"epsilon_report", r.epsilon_report},
                       {"max_abs_x_dot", r.max_abs_x_dot},
                       {"final_X", r.final_state.X},
                       {"apriori_ratio", h.empty() ? 0.0 : h.back().apriori_ratio},
                       {"contraction_slack", slack},
                       {"status", r.status}};
  finish(out, "simulate", s);
  return out;
}

CommandOutcome cmd_probe(const Scenario& s) {
  const SimConfig& c = s.config;
  const ModelParams& m = c.model;
  const EndStates e = left_state_from_right(m, c.v_plus, c.u_plus, c.delta_v);
  const ShockConstants k = o1_constants(m, e);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CommandOutcome out;

  // Leading coefficients of the relative-quantity bounds at |v - vbar| = 1e-3.
  double worst_coef = 0.0;
  json bounds = json::array();
  for (double vbar : {e.v_minus, 0.5 * (e.v_minus + e.v_plus), e.v_plus}) {
    for (double sign : {-1.0, 1.0}) {
      const RelativeBoundsProbe pr =
          relative_bounds_probe(m, vbar + sign * kLeadingCoefOffset, vbar, e.v_plus, e.delta);
      const double ep = std::abs(pr.p_upper.ratio / pr.p_upper.coefficient - 1.0);
      const double eq = std::abs(pr.q_upper.ratio / pr.q_upper.coefficient - 1.0);
      worst_coef = std::max({worst_coef, ep, eq});
      bounds.push_back({{"vbar", vbar},
                       {"v", vbar + sign * kLeadingCoefOffset},
                       {"p_ratio", pr.p_upper.ratio},
                       {"p_coefficient", pr.p_upper.coefficient},
                       {"q_ratio", pr.q_upper.ratio},
                       {"q_coefficient", pr.q_upper.coefficient},
                       {"c_volume_vs_q", pr.c_volume_vs_q},
                       {"c_volume_vs_p", pr.c_volume_vs_p},
                       {"c_lipschitz", pr.c_lipschitz}});
    }
  }
  add(out, s, "probes", {"leading_coefficients", worst_coef <= kLeadingCoefTol, worst_coef,
                         kLeadingCoefTol, "relative error of the v -> vbar coefficient ratios"});
  out.report["relative_bounds"] = bounds;

  // Completion of the square on random fields.
  {
    const std::size_t n = 1000;
    std::vector<double> dp(n), w(n), ax(n);
    for (std::size_t i = 0; i < n; ++i) {
      dp[i] = 2.0 * unit(rng) - 1.0;
      w[i] = 2.0 * unit(rng) - 1.0;
      ax[i] = unit(rng);
    }
    const double res = completion_of_square_check(dp, w, ax, k.c_star);
    add(out, s, "probes", {"completion_of_square", res <= kSquareTol, res, kSquareTol,
                           "relative residual on 1000 random nodes"});
  }

  // Weighted Poincare inequality.
  {
    std::size_t failures = 0;
    double worst_gap = -1e300;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 3 + static_cast<std::size_t>(unit(rng) * 60.0);
      std::vector<double> y(n), f(n);
      for (auto& v : y) v = unit(rng);
      std::sort(y.begin(), y.end());
      y.erase(std::unique(y.begin(), y.end()), y.end());
      if (y.size() < 3) continue;
      f.resize(y.size());
      for (auto& v : f) v = 2.0 * unit(rng) - 1.0;
      const PoincareResult pr = poincare_check(y, f);
      if (!pr.holds()) ++failures;
      worst_gap = std::max(worst_gap, pr.lhs - pr.rhs);
    }
    add(out, s, "poincare", {"poincare_random", failures == 0, double(failures), 0.0,
                             "violations over 1000 random piecewise-linear functions"});
    const std::size_t n = 10000;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = double(i) / double(n - 1);
    const PoincareResult aff = poincare_check(y, y);
    const double err = std::max(std::abs(aff.lhs - 1.0 / 12.0), std::abs(aff.rhs - 1.0 / 12.0));
    add(out, s, "poincare", {"poincare_affine_equality", err <= kPoincareAffineTol, err,
                             kPoincareAffineTol, "f(y) = y gives lhs = rhs = 1/12"});
    out.report["poincare"] = {{"worst_lhs_minus_rhs", worst_gap},
                              {"affine_lhs", aff.lhs},
                              {"affine_rhs", aff.rhs}};
  }

  // sigma_ell^3 alpha_ell = (1 + gamma)/(2 v-).
  {
    const double lhs = std::pow(k.sigma_ell, 3) * k.alpha_ell;
    const double rhs = (1.0 + m.gamma) / (2.0 * e.v_minus);
    const double rel = std::abs(lhs - rhs) / rhs;
    add(out, s, "probes", {"sigma_alpha_identity", rel <= kIdentityAlphaTol, rel, kIdentityAlphaTol,
                           "sigma_ell^3 alpha_ell against (1 + gamma)/(2 v-)"});
  }

  // Diffusion coefficient of the y-variable (shape only, reported).
  {
    const ShockProfile p = solve_profile(m, e, c.profile);
    const DiffusionProbe d = diffusion_coefficient_probe(p);
    add(out, s, "probes", {"diffusion_probe_finite", std::isfinite(d.ratio), d.ratio, 0.0,
                           "max deviation / delta^2 (reported)"});
    out.report["diffusion_probe"] = {{"max_deviation", d.max_deviation},
                                     {"delta", d.delta},
                                     {"ratio", d.ratio},
                                     {"limit_value", d.limit_value},
                                     {"cutoff", d.cutoff},
                                     {"samples", d.samples}};
    double spread = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      spread = std::max(spread, std::abs(k.sigma_ell * k.sigma_ell + pressure_deriv(m, p.v_tilde[i])));
    }
    out.report["shock_speed"] = {{"sigma", e.sigma},
                                 {"sigma_ell", k.sigma_ell},
                                 {"speed_gap_over_delta", std::abs(e.sigma - k.sigma_ell) / e.delta},
                                 {"sound_speed_spread_over_delta", spread / e.delta}};
  }
  out.report["seed"] = c.seed;
  finish(out, "probe", s);
  return out;
}

CommandOutcome cmd_sweep(const Scenario& s) {
  const std::vector<Scenario> members = expand_sweep(s);
  std::vector<std::future<CommandOutcome>> jobs;
  for (const auto& m : members) {
    jobs.push_back(std::async(std::launch::async, [m] { return run_command("simulate", m); }));
  }
  CommandOutcome out;
  json arr = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    CommandOutcome r = jobs[i].get();
    out.exit_code = std::max(out.exit_code, r.exit_code);
    const bool ok = r.exit_code == kExitPass;
    out.checks.push_back({members[i].name, ok, double(r.exit_code), 0.0,
                          "member exit code, output in " + members[i].output_dir.string()});
    arr.push_back({{"name", members[i].name},
                   {"delta", s.sweep_delta[i]},
                   {"delta_v", members[i].config.delta_v},
                   {"exit_code", r.exit_code},
                   {"output_dir", members[i].output_dir.string()}});
  }
  out.report["members"] = arr;
  finish(out, "sweep", s);
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UsageError*>(&e) ||
      dynamic_cast<const InvalidShock*>(&e)) {
    return kExitUsage;
  }
  return kExitRuntime;
}

json error_json(const std::exception& e) {
  std::string type = "error";
  if (dynamic_cast<const ConfigError*>(&e)) type = "config_error";
  else if (dynamic_cast<const UsageError*>(&e)) type = "usage_error";
  else if (dynamic_cast<const InvalidShock*>(&e)) type = "invalid_shock";
  else if (dynamic_cast<const ShockTooStrong*>(&e)) type = "shock_too_strong";
  else if (dynamic_cast<const VacuumError*>(&e)) type = "vacuum";
  else if (dynamic_cast<const SolverFailure*>(&e)) type = "solver_failure";
  else if (dynamic_cast<const DomainError*>(&e)) type = "domain_error";
  json j = {{"error", type}, {"message", e.what()}, {"exit_code", exit_code_for(e)}};
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    if (!ce->key().empty()) j["key"] = ce->key();
    if (ce->line() > 0) j["line"] = ce->line();
  }
  return j;
}

CommandOutcome run_command(const std::string& command, const Scenario& s) {
  try {
    if (command == "profile") return cmd_profile(s);
    if (command == "simulate") return cmd_simulate(s);
    if (command == "probe") return cmd_probe(s);
    if (command == "sweep") return cmd_sweep(s);
    throw UsageError("unknown command '" + command + "'");
  } catch (const std::exception& e) {
    CommandOutcome out;
    out.exit_code = exit_code_for(e);
    out.report = error_json(e);
    try {
      fs::create_directories(s.output_dir);
      std::ofstream os(s.output_dir / "error.json");
      os << out.report.dump(2) << '\n';
    } catch (...) {
      // The directory itself may be the problem; stderr still carries the error.
    }
    return out;
  }
}

}  // namespace nslab
