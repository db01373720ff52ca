#include "nslab/hugoniot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nslab/errors.hpp"

namespace nslab {

double shock_speed(const ModelParams& m, double v_minus, double v_plus) {
  if (!(v_minus > 0.0) || !(v_plus > 0.0)) {
    throw DomainError("shock_speed: specific volumes must be positive");
  }
  if (!(v_minus < v_plus)) {
    throw InvalidShock("shock_speed: entropy condition requires v- < v+");
  }
  // -(p(v+) - p(v-)) / (v+ - v-) written through the cancellation-free difference.
  const double slope = -pressure_difference(m, v_plus, v_minus) / (v_plus - v_minus);
  return std::sqrt(slope);
}

EndStates left_state_from_right(const ModelParams& m, double v_plus, double u_plus,
                                double delta_v) {
  if (!(v_plus > 0.0)) throw DomainError("left_state_from_right: v+ must be positive");
  if (!(delta_v > 0.0) || !(delta_v < v_plus)) {
    std::ostringstream os;
    os << "left_state_from_right: delta_v must lie in (0, v+), got " << delta_v;
    throw InvalidShock(os.str());
  }
  EndStates e;
  e.v_plus = v_plus;
  e.u_plus = u_plus;
  e.v_minus = v_plus - delta_v;
  e.sigma = shock_speed(m, e.v_minus, e.v_plus);
  const double du = e.sigma * (e.v_plus - e.v_minus);
  e.u_minus = u_plus + du;
  e.delta = du;
  return e;
}

double delta_v_for_strength(const ModelParams& m, double v_plus, double delta) {
  if (!(delta > 0.0)) throw InvalidShock("delta_v_for_strength: delta must be positive");
  auto strength = [&](double dv) { return shock_speed(m, v_plus - dv, v_plus) * dv; };
  double lo = 0.0;
  double hi = v_plus;
  // delta -> infinity as v- -> 0, so the bracket always closes.
  if (strength(hi * (1.0 - 1e-12)) < delta) {
    throw InvalidShock("delta_v_for_strength: no admissible shock of that strength");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * v_plus; ++it) {
    const double mid = 0.5 * (lo + hi);
    (strength(mid) < delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double RhResidual::max_relative() const {
  return std::max(std::abs(mass), std::abs(momentum)) / scale;
}

RhResidual rh_residual(const ModelParams& m, const EndStates& e) {
  RhResidual r;
  const double dv = e.v_plus - e.v_minus;
  const double du = e.u_plus - e.u_minus;
  const double dp = pressure_difference(m, e.v_plus, e.v_minus);
  r.mass = -e.sigma * dv - du;
  r.momentum = -e.sigma * du + dp;
  r.scale = std::max({std::abs(e.sigma * dv), std::abs(du), std::abs(dp),
                      std::numeric_limits<double>::min()});
  return r;
}

void validate_end_states(const ModelParams& m, const EndStates& e) {
  if (!(e.v_minus > 0.0 && e.v_plus > 0.0)) {
    throw DomainError("end states: specific volumes must be positive");
  }
  if (!(e.v_minus < e.v_plus && e.u_minus > e.u_plus)) {
    throw InvalidShock("end states violate the entropy condition v- < v+, u- > u+");
  }
  if (!(e.sigma > 0.0)) throw InvalidShock("end states: shock speed must be positive");
  if (rh_residual(m, e).max_relative() > 1e-12) {
    throw InvalidShock("end states do not satisfy the Rankine-Hugoniot relations");
  }
}

double alpha_ell_from_derivatives(const ModelParams& m, double v_minus) {
  const double dp = pressure_deriv(m, v_minus);
  const double sigma_ell = std::sqrt(-dp);
  return pressure_deriv2(m, v_minus) / (2.0 * dp * dp * sigma_ell);
}

ShockConstants o1_constants(const ModelParams& m, const EndStates& e) {
  validate_end_states(m, e);
  ShockConstants c;
  const double p_minus = pressure(m, e.v_minus);
  c.sigma_ell = lagrangian_sound_speed(m, e.v_minus);
  c.alpha_ell = (m.gamma + 1.0) / (2.0 * m.gamma * c.sigma_ell * p_minus);

  const double alt = alpha_ell_from_derivatives(m, e.v_minus);
  if (std::abs(alt - c.alpha_ell) > 1e-12 * std::abs(c.alpha_ell)) {
    throw SolverFailure("o1_constants: the two expressions for alpha_ell disagree");
  }

  c.c_star = 0.5 * (1.0 / c.sigma_ell -
                    std::sqrt(e.delta) * (m.gamma + 1.0) / m.gamma / p_minus);
  if (!(c.c_star > 0.0)) {
    std::ostringstream os;
    os << "shock too strong: C* = " << c.c_star << " <= 0 at delta = " << e.delta;
    throw ShockTooStrong(os.str());
  }
  c.m_shift = 5.0 * c.sigma_ell * c.sigma_ell * c.sigma_ell * c.alpha_ell / 4.0;
  return c;
}

}  // namespace nslab
