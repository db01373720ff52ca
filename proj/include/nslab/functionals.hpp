#pragma once

// Weighted relative-entropy ledger on the simulation grid. Every integral uses
// the trapezoidal rule of SimGrid::integrate, the same rule the shift ODE uses,
// so the identities close at the discrete level.

#include <span>
#include <string>
#include <vector>

#include "nslab/grid.hpp"
#include "nslab/profile.hpp"

namespace nslab {

struct DiagnosticsRecord {
  double t = 0.0;
  double X = 0.0;
  double X_dot = 0.0;
  double weighted_rel_entropy = 0.0;  ///< int a eta(U | U~^X)

  double G1 = 0.0;
  double GS = 0.0;
  double Dv = 0.0;
  double Du1 = 0.0;
  double Du2 = 0.0;

  double Y1 = 0.0;
  double Y2 = 0.0;
  double Y3 = 0.0;
  double Y4 = 0.0;

  double B1 = 0.0;
  double B2 = 0.0;
  double B3 = 0.0;
  double B4 = 0.0;
  double B5 = 0.0;  ///< shape only: unspecified constant taken as 1
  double B6 = 0.0;  ///< shape only
  double curlyG1 = 0.0;
  double curlyG2 = 0.0;
  double curlyD = 0.0;

  /// Filled from the history; 0 at the first and last tick.
  double identity_residual = 0.0;

  double sup_norm_v = 0.0;
  double sup_norm_u = 0.0;
  /// ||v - v~^X||_H1^2 + ||u - u~^X||_H1^2
  double h1_perturbation = 0.0;
  double g = 0.0;
  /// Running maximum of the a-priori ratio; filled from the history.
  double apriori_ratio = 0.0;

  // Not part of the CSV.
  double j_bad = 0.0;
  double j_good = 0.0;
  double y_direct = 0.0;  ///< Y(U) from its undecomposed definition
  double x_dot_recomputed = 0.0;

  double y_sum() const { return Y1 + Y2 + Y3 + Y4; }
};

/// Evaluates every functional at one state against the profile shifted by state.X.
DiagnosticsRecord ledger(const SimState& state, const ShockProfile& profile, const SimGrid& grid);

/// |centered dE/dt - (X' Y + J_bad - J_good)| per tick, E = int a eta.
/// First and last entries are 0. Throws UsageError for fewer than 3 ticks or a
/// non-uniform cadence.
std::vector<double> energy_identity_residual(std::span<const DiagnosticsRecord> history);

/// Fills identity_residual (when there are at least 3 ticks) and
/// apriori_ratio of every record.
void finalize_history(std::vector<DiagnosticsRecord>& history, double delta);

/// Pointwise a_x (dp w - C* dp^2) = a_x (-C* (dp - w/(2C*))^2 + w^2/(4C*)),
/// returned as the largest residual relative to the size of the terms.
double completion_of_square_check(std::span<const double> dp, std::span<const double> w,
                                  std::span<const double> a_x, double c_star);
double completion_of_square_check(const SimState& state, const ShockProfile& profile,
                                  const SimGrid& grid);

struct PoincareResult {
  double lhs = 0.0;  ///< int_0^1 |f - mean f|^2
  double rhs = 0.0;  ///< 1/2 int_0^1 y(1-y) |f'|^2
  bool holds(double tol = 1e-12) const { return lhs <= rhs + tol * (1.0 + rhs); }
};

/// f is taken piecewise linear through (y_i, f_i) and constant outside
/// [y_0, y_last]; both sides are integrated exactly. y must be strictly
/// increasing inside [0, 1].
PoincareResult poincare_check(std::span<const double> y, std::span<const double> f);

struct YFrame {
  std::vector<double> y;
  std::vector<double> f;
  std::vector<double> jacobian;  ///< dy/dx = -u~_x / delta
  std::vector<double> x;         ///< grid abscissae of the kept samples
};

/// y = (u- - u~^X)/delta and f = u - u~^X at grid nodes where y is strictly
/// increasing (the flat far field is dropped).
YFrame y_frame(const SimState& state, const ShockProfile& profile, const SimGrid& grid);

/// Running maximum of
///   [max_s h1(s) + delta int |X'|^2 + int (G1 + GS) + int (Dv + Du1 + Du2)] / h1(0),
/// time integrals by the trapezoidal rule over ticks. Reported as 1 when
/// h1(0) = 0. Throws UsageError on an empty history.
std::vector<double> apriori_ratio(std::span<const DiagnosticsRecord> history, double delta);

struct DissipationIntegrals {
  std::vector<double> dissipation;  ///< int_0^t (Dv + Du1 + Du2)
  std::vector<double> good;         ///< int_0^t (G1 + GS)
};
DissipationIntegrals dissipation_integrals(std::span<const DiagnosticsRecord> history);

/// Largest one-tick increase of int a eta, relative to its initial value
/// (0 when the initial value is 0).
double contraction_slack(std::span<const DiagnosticsRecord> history);

struct DiffusionProbe {
  double max_deviation = 0.0;
  double delta = 0.0;
  double ratio = 0.0;         ///< max_deviation / delta^2
  double limit_value = 0.0;   ///< (sigma/(2 sigma_ell)) delta v''(p-)/|v'(p-)|^2
  double cutoff = 0.02;
  std::size_t samples = 0;
};

/// max over profile samples with y in [cutoff, 1 - cutoff] of
/// |(1/(y(1-y))) (1/v~) dy/dx - limit_value|.
DiffusionProbe diffusion_coefficient_probe(const ShockProfile& profile, double cutoff = 0.02);

/// CSV header of the diagnostics file.
const std::string& diagnostics_csv_header();
/// One CSV row (17 significant digits), no trailing newline.
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

}  // namespace nslab
