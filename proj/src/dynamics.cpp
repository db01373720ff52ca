#include "nslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nslab/errors.hpp"

namespace nslab {

SimGrid SimGrid::uniform(double x_min, double x_max, std::size_t n_cells) {
  if (!(x_max > x_min)) throw UsageError("SimGrid: x_max must exceed x_min");
  if (n_cells < 4) throw UsageError("SimGrid: need at least 4 cells");
  SimGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_cells = n_cells;
  g.dx = (x_max - x_min) / static_cast<double>(n_cells);
  g.x.resize(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) g.x[i] = x_min + static_cast<double>(i) * g.dx;
  g.x.back() = x_max;
  return g;
}

double SimGrid::integrate(std::span<const double> f) const {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

std::string to_string(PerturbationShape s) {
  switch (s) {
    case PerturbationShape::zero: return "zero";
    case PerturbationShape::gaussian_bump: return "gaussian-bump";
    case PerturbationShape::compact_bump: return "compact-bump";
  }
  return "zero";
}

PerturbationShape perturbation_shape_from_string(const std::string& s) {
  if (s == "zero") return PerturbationShape::zero;
  if (s == "gaussian-bump") return PerturbationShape::gaussian_bump;
  if (s == "compact-bump") return PerturbationShape::compact_bump;
  throw UsageError("unknown perturbation shape '" + s +
                   "' (expected zero | gaussian-bump | compact-bump)");
}

double PerturbationSpec::bump(double x) const {
  const double r = (x - center) / width;
  switch (shape) {
    case PerturbationShape::zero: return 0.0;
    case PerturbationShape::gaussian_bump: return std::exp(-0.5 * r * r);
    case PerturbationShape::compact_bump: {
      if (std::abs(r) >= 1.0) return 0.0;
      const double q = 1.0 - r * r;
      return q * q * q * q;
    }
  }
  return 0.0;
}

namespace {

// H1 norm of node data with central differences in the interior.
double h1_norm(std::span<const double> f, const SimGrid& g) {
  std::vector<double> sq(f.size());
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0) d = (f[1] - f[0]) / g.dx;
    else if (i + 1 == n) d = (f[n - 1] - f[n - 2]) / g.dx;
    else d = (f[i + 1] - f[i - 1]) / (2.0 * g.dx);
    sq[i] = f[i] * f[i] + d * d;
  }
  return std::sqrt(g.integrate(sq));
}

}  // namespace

InitialData initial_data(const ShockProfile& profile, const PerturbationSpec& spec,
                         const SimGrid& grid) {
  if (spec.shape != PerturbationShape::zero && !(spec.width > 0.0)) {
    throw UsageError("perturbation width must be positive");
  }
  const double edge = std::max(std::abs(spec.bump(grid.x_min)), std::abs(spec.bump(grid.x_max)));
  const double amp = std::max(std::abs(spec.amplitude_v), std::abs(spec.amplitude_u));
  if (edge * amp >= 1e-12) {
    throw UsageError("perturbation does not decay below 1e-12 at the window edges");
  }

  const ShiftedProfile base = shifted_eval(profile, grid.x, 0.0);
  InitialData out;
  SimState& s = out.state;
  const std::size_t n = grid.n_nodes();
  s.v = base.v;
  s.u = base.u;
  std::vector<double> pv(n, 0.0), pu(n, 0.0);
  // Boundary nodes stay on the far-field states.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double b = spec.bump(grid.x[i]);
    pv[i] = spec.amplitude_v * b;
    pu[i] = spec.amplitude_u * b;
    s.v[i] += pv[i];
    s.u[i] += pu[i];
    if (!(s.v[i] > 0.0)) {
      std::ostringstream os;
      os << "initial data: perturbation drives v <= 0 at x = " << grid.x[i];
      throw VacuumError(os.str());
    }
  }
  s.t = 0.0;
  s.X = 0.0;
  out.epsilon_report = h1_norm(pv, grid) + h1_norm(pu, grid);
  s.X_dot = shift_rate(s, profile, grid);
  return out;
}

ShiftIntegrals shift_integrals(std::span<const double> u, double X,
                               const ShockProfile& profile, const SimGrid& grid) {
  const EndStates& e = profile.ends;
  const ModelParams& m = profile.params;
  const double sd = std::sqrt(e.delta);
  const std::size_t n = grid.n_nodes();
  // Only nodes inside the shifted profile window contribute (v_x = 0 outside).
  const double lo = profile.xi.front() + X;
  const double hi = profile.xi.back() + X;
  ShiftIntegrals y;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x[i];
    if (x <= lo || x >= hi) continue;
    const ProfilePoint pt = profile_at(profile, x - X);
    const double ut = e.u_minus - e.sigma * (pt.v - e.v_minus);
    const double a = std::clamp(1.0 + (e.u_minus - ut) / sd, 1.0, 1.0 + sd);
    const double ut_x = -e.sigma * pt.v_x;
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    const double du = u[i] - ut;
    y.y1 += w * a * ut_x * du;
    y.y2 += w * a * pressure_deriv(m, pt.v) * pt.v_x * du;
  }
  y.y1 *= grid.dx;
  y.y2 *= grid.dx / e.sigma;
  return y;
}

double shift_rate(const ShiftIntegrals& y, const ShockProfile& profile) {
  return -profile.constants.m_shift / profile.ends.delta * (y.y1 + y.y2);
}

double shift_rate(const SimState& state, const ShockProfile& profile, const SimGrid& grid) {
  return shift_rate(shift_integrals(state.u, state.X, profile, grid), profile);
}

double cfl_dt(const SimState& state, const SimGrid& grid, const ModelParams& m,
              double sigma, double cfl_number, bool implicit_diffusion) {
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) {
    throw UsageError("cfl_number must lie in (0, 1]");
  }
  double cmax = 0.0;
  double vmin = state.v.front();
  for (double v : state.v) {
    cmax = std::max(cmax, lagrangian_sound_speed(m, v));
    vmin = std::min(vmin, v);
  }
  double dt = cfl_number * grid.dx / (sigma + cmax);
  if (!implicit_diffusion) {
    dt = std::min(dt, cfl_number * 0.5 * grid.dx * grid.dx * vmin / m.mu);
  }
  return dt;
}

double StepReport::conservation_residual() const { return std::abs(mass_change - boundary_flux); }

FrameStepper::FrameStepper(std::shared_ptr<const ShockProfile> profile, SimGrid grid)
    : profile_(std::move(profile)), grid_(std::move(grid)) {
  const std::size_t n = grid_.n_nodes();
  const ShiftedProfile base = shifted_eval(*profile_, grid_.x, 0.0);
  base_v_ = base.v;
  // 1/64 damps the 2dx mode by about e^{-cfl/4} per step and stays well inside
  // the SSP-RK3 stability region for cfl <= 1.
  damping_ = (profile_->ends.sigma + lagrangian_sound_speed(profile_->params, profile_->ends.v_minus)) / 64.0;
  source_hyp_.assign(n, 0.0);
  source_diff_.assign(n, 0.0);

  std::vector<double> dv(n), du(n);
  double flux = 0.0;
  hyperbolic_rhs(base.v, base.u, dv, du, flux);
  const double mu = profile_->params.mu;
  const double r = 1.0 / (grid_.dx * grid_.dx);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    source_hyp_[i] = -du[i];
    const double kr = 0.5 * mu * (1.0 / base.v[i] + 1.0 / base.v[i + 1]);
    const double kl = 0.5 * mu * (1.0 / base.v[i - 1] + 1.0 / base.v[i]);
    source_diff_[i] =
        -r * (kr * (base.u[i + 1] - base.u[i]) - kl * (base.u[i] - base.u[i - 1]));
  }
}

double FrameStepper::max_balance_source() const {
  double s = 0.0;
  for (std::size_t i = 0; i < source_hyp_.size(); ++i) {
    s = std::max({s, std::abs(source_hyp_[i]), std::abs(source_diff_[i])});
  }
  return s;
}

void FrameStepper::hyperbolic_rhs(std::span<const double> v, std::span<const double> u,
                                  std::span<double> dv, std::span<double> du,
                                  double& flux_diff) const {
  const ModelParams& m = profile_->params;
  const double sigma = profile_->ends.sigma;
  const std::size_t n = v.size();
  const double inv_dx = 1.0 / grid_.dx;

  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream os;
      os << "vacuum or blow-up at x = " << grid_.x[i] << " (v = " << v[i] << ")";
      throw VacuumError(os.str());
    }
    p[i] = pressure(m, v[i]);
  }

  double f_left = 0.5 * (sigma * (v[0] + v[1]) + u[0] + u[1]);
  double g_left = 0.5 * (sigma * (u[0] + u[1]) - p[0] - p[1]);
  const double f_first = f_left;
  dv[0] = du[0] = dv[n - 1] = du[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double f_right = 0.5 * (sigma * (v[i] + v[i + 1]) + u[i] + u[i + 1]);
    const double g_right = 0.5 * (sigma * (u[i] + u[i + 1]) - p[i] - p[i + 1]);
    dv[i] = (f_right - f_left) * inv_dx;
    du[i] = (g_right - g_left) * inv_dx + source_hyp_[i];
    f_left = f_right;
    g_left = g_right;
  }
  flux_diff = f_left - f_first;

  // s_i = second difference of z = v - v_tilde, zero on the Dirichlet nodes.
  // Summation by parts gives sum z (d2 s) = sum s^2, so the term only removes
  // energy; its net mass change goes through the end faces.
  std::vector<double> sd(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sd[i] = (v[i + 1] - base_v_[i + 1]) - 2.0 * (v[i] - base_v_[i]) + (v[i - 1] - base_v_[i - 1]);
  }
  const double k = damping_ * inv_dx;
  for (std::size_t i = 1; i + 1 < n; ++i) dv[i] -= k * (sd[i + 1] - 2.0 * sd[i] + sd[i - 1]);
  flux_diff += k * grid_.dx * (sd[1] + sd[n - 2]);
}

void FrameStepper::diffuse(std::span<const double> v, std::span<double> u, double tau) const {
  // Crank-Nicolson for u_t = (mu u_x / v)_x + s on interior nodes, v frozen
  // (v does not change under this sub-problem).
  const std::size_t n = u.size();
  const std::size_t m = n - 2;
  const double mu = profile_->params.mu;
  const double r = tau / (2.0 * grid_.dx * grid_.dx);

  std::vector<double> k(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) k[i] = 0.5 * mu * (1.0 / v[i] + 1.0 / v[i + 1]);

  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = j + 1;
    const double kl = k[i - 1];
    const double kr = k[i];
    lower[j] = -r * kl;
    upper[j] = -r * kr;
    diag[j] = 1.0 + r * (kl + kr);
    rhs[j] = u[i] + r * (kr * (u[i + 1] - u[i]) - kl * (u[i] - u[i - 1])) +
             tau * source_diff_[i];
  }
  rhs.front() += r * k[0] * u[0];
  rhs.back() += r * k[n - 2] * u[n - 1];

  // Thomas algorithm; diagonally dominant, no pivoting needed.
  for (std::size_t j = 1; j < m; ++j) {
    const double w = lower[j] / diag[j - 1];
    diag[j] -= w * upper[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  u[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) {
    u[j + 1] = (rhs[j] - upper[j] * u[j + 2]) / diag[j];
  }
}

StepReport FrameStepper::advance(SimState& s, double dt) const {
  if (!(dt > 0.0)) throw UsageError("advance: dt must be positive");
  const std::size_t n = grid_.n_nodes();
  StepReport rep;

  diffuse(s.v, s.u, 0.5 * dt);

  // SSP-RK3 on (v, u, X).
  const std::vector<double> v0 = s.v;
  const std::vector<double> u0 = s.u;
  const double X0 = s.X;
  std::vector<double> dv(n), du(n), v1 = v0, u1 = u0, v2 = v0, u2 = u0;
  double f0, f1, f2;

  hyperbolic_rhs(v0, u0, dv, du, f0);
  const double xd0 = shift_rate(shift_integrals(u0, X0, *profile_, grid_), *profile_);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    v1[i] = v0[i] + dt * dv[i];
    u1[i] = u0[i] + dt * du[i];
  }
  const double X1 = X0 + dt * xd0;

  hyperbolic_rhs(v1, u1, dv, du, f1);
  const double xd1 = shift_rate(shift_integrals(u1, X1, *profile_, grid_), *profile_);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    v2[i] = 0.75 * v0[i] + 0.25 * (v1[i] + dt * dv[i]);
    u2[i] = 0.75 * u0[i] + 0.25 * (u1[i] + dt * du[i]);
  }
  const double X2 = 0.75 * X0 + 0.25 * (X1 + dt * xd1);

  hyperbolic_rhs(v2, u2, dv, du, f2);
  const double xd2 = shift_rate(shift_integrals(u2, X2, *profile_, grid_), *profile_);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    s.v[i] = v0[i] / 3.0 + 2.0 / 3.0 * (v2[i] + dt * dv[i]);
    s.u[i] = u0[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * du[i]);
  }
  s.X = X0 / 3.0 + 2.0 / 3.0 * (X2 + dt * xd2);

  rep.boundary_flux = dt * (f0 / 6.0 + f1 / 6.0 + 2.0 * f2 / 3.0);
  double dm = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) dm += s.v[i] - v0[i];
  rep.mass_change = dm * grid_.dx;

  diffuse(s.v, s.u, 0.5 * dt);

  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.v[i] > 0.0) || !std::isfinite(s.v[i]) || !std::isfinite(s.u[i])) {
      std::ostringstream os;
      os << "vacuum or blow-up at x = " << grid_.x[i] << ", t = " << s.t + dt
         << " (v = " << s.v[i] << ")";
      throw VacuumError(os.str());
    }
  }
  s.t += dt;
  s.X_dot = shift_rate(s, *profile_, grid_);
  return rep;
}

}  // namespace nslab
