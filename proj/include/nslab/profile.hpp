#pragma once

// Viscous 2-shock traveling wave. The profile ODE is reduced to its first
// integral,
//   v' = -(v / (sigma mu)) [sigma^2 (v - v-) + p(v) - p(v-)],
// integrated outward from the center v(0) = (v- + v+)/2. Each half is carried
// in the deviation from its own far-field state, so exponentially small tails
// stay resolved instead of rounding to v-/v+.

#include <iosfwd>
#include <span>
#include <vector>

#include "nslab/hugoniot.hpp"
#include "nslab/model.hpp"

namespace nslab {

struct ShockProfile {
  ModelParams params;
  EndStates ends;
  ShockConstants constants;

  double half_length = 0.0;
  double spacing = 0.0;
  std::vector<double> xi;
  std::vector<double> v_tilde;
  std::vector<double> u_tilde;
  std::vector<double> v_tilde_x;
  std::vector<double> u_tilde_x;
  std::vector<double> v_tilde_xx;
  std::vector<double> u_tilde_xx;
  std::vector<double> v_tilde_xxx;
  /// v_tilde minus the far-field state on the same side of the center.
  std::vector<double> deviation;

  double misfit_left = 0.0;   ///< |v(-L) - v-|
  double misfit_right = 0.0;  ///< |v(+L) - v+|

  std::size_t size() const { return xi.size(); }
  std::size_t center_index() const { return xi.size() / 2; }
  double far_field_misfit() const { return std::max(misfit_left, misfit_right); }
};

struct WeightFn {
  std::vector<double> a;
  std::vector<double> a_x;
};

/// dv/dxi of the first-integral ODE. Vanishes at v- and v+; DomainError outside.
double profile_rhs(const ModelParams& m, const EndStates& e, double v);

/// Default half-length 30/(sigma_ell delta) * max(1, |ln tol|/10).
double default_half_length(const ShockConstants& c, const EndStates& e, double misfit_tol);

struct ProfileOptions {
  double half_length = 0.0;  ///< 0 selects default_half_length
  std::size_t n_samples = 32769;
  double misfit_tol = 1e-9;
  double rel_tol = 1e-12;  ///< integrator relative tolerance
  bool operator==(const ProfileOptions&) const = default;
};

/// Solves for the profile. n_samples is rounded up to an odd count so that the
/// center xi = 0 is a grid node. Throws SolverFailure if the far-field misfit
/// exceeds the tolerance or the integration stalls.
ShockProfile solve_profile(const ModelParams& m, const EndStates& e,
                           const ProfileOptions& opts = {});

/// a = 1 + (u- - u_tilde)/sqrt(delta), a_x = sigma v_tilde_x / sqrt(delta).
WeightFn build_weight(const ShockProfile& profile);

/// v_tilde and its first two derivatives at a single abscissa.
struct ProfilePoint {
  double v = 0.0;
  double v_x = 0.0;
  double v_xx = 0.0;
};

/// Pointwise evaluation used by shifted_eval.
ProfilePoint profile_at(const ShockProfile& profile, double xi);

/// Profile quantities sampled at xi = x - shift.
struct ShiftedProfile {
  std::vector<double> v;
  std::vector<double> u;
  std::vector<double> v_x;
  std::vector<double> u_x;
  std::vector<double> u_xx;
  std::vector<double> a;
  std::vector<double> a_x;
  std::size_t size() const { return v.size(); }
};

/// Evaluates the profile at x - shift for each x. Inside the window the values
/// are piecewise cubic Hermite interpolants built on the stored analytic
/// derivatives (monotonicity-limited for v); outside they clamp to the far
/// field with zero derivatives.
ShiftedProfile shifted_eval(const ShockProfile& profile, std::span<const double> x,
                            double shift);

/// Least-squares fit of log|deviation| against xi over the outer quarter of
/// the right (or left) half.
struct TailFit {
  double slope = 0.0;
  double r_squared = 0.0;
};
TailFit tail_fit(const ShockProfile& profile, bool right_side);

/// CSV with header xi,v_tilde,u_tilde,v_tilde_x,u_tilde_x,u_tilde_xx,a,a_x.
void write_profile_csv(std::ostream& os, const ShockProfile& profile);

}  // namespace nslab
