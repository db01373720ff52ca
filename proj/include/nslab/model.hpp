#pragma once

// Equation of state for the barotropic gas in Lagrangian mass coordinates,
// p(v) = b v^-gamma, together with the internal energy Q (Q' = -p) and the
// relative quantities built from them.

#include <functional>

namespace nslab {

struct ModelParams {
  double gamma = 5.0 / 3.0;
  double b = 1.0;
  double mu = 1.0;

  /// Throws DomainError unless gamma > 1, b > 0, mu > 0.
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

/// (v, u) pair: specific volume and velocity.
struct FlowState {
  double v = 1.0;
  double u = 0.0;
};

double pressure(const ModelParams& m, double v);
double pressure_deriv(const ModelParams& m, double v);
double pressure_deriv2(const ModelParams& m, double v);
/// Sound speed in mass coordinates, sqrt(-p'(v)).
double lagrangian_sound_speed(const ModelParams& m, double v);

/// Q(v) = b v^(1-gamma) / (gamma-1), normalized so that Q'(v) = -p(v).
double internal_energy(const ModelParams& m, double v);

/// p(v) - p(w) evaluated without cancellation when v is close to w.
double pressure_difference(const ModelParams& m, double v, double w);

/// Generic relative quantity F(v|w) = F(v) - F(w) - F'(w)(v - w).
double relative_quantity(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double v,
                         double w);

/// p(v|w); computed in a cancellation-free form.
double relative_pressure(const ModelParams& m, double v, double w);
/// Q(v|w); computed in a cancellation-free form.
double relative_internal_energy(const ModelParams& m, double v, double w);

/// eta(U|Ubar) = |u - ubar|^2 / 2 + Q(v|vbar).
double rel_entropy_density(const ModelParams& m, FlowState U, FlowState Ubar);

/// One side-by-side comparison from the relative-quantity bounds.
struct BoundProbe {
  double lhs = 0.0;
  double rhs = 0.0;        ///< leading-order right-hand side (unspecified C set to 0)
  double ratio = 0.0;      ///< lhs / (quadratic form); compare against `coefficient`
  double coefficient = 0.0;
  /// Smallest C making lhs <= (coefficient + C*delta) * form; 0 when already satisfied.
  double implied_c = 0.0;
};

struct RelativeBoundsProbe {
  // |v - vbar|^2 <= C Q(v|vbar) and |v - vbar|^2 <= C p(v|vbar): reported C = ratio.
  double c_volume_vs_q = 0.0;
  double c_volume_vs_p = 0.0;
  bool range1_ok = false;  ///< 0 < vbar < 2 v+, 0 < v < 3 v+
  // |p(v) - p(vbar)| <= C |v - vbar|
  double c_lipschitz = 0.0;
  bool range2_ok = false;  ///< v, vbar > v+/2
  // Weak-perturbation quadratic bounds in terms of p(v) - p(vbar).
  BoundProbe p_upper;
  BoundProbe q_lower;  ///< rhs includes the explicit cubic correction
  BoundProbe q_upper;
  bool range3_ok = false;  ///< |p(v)-p(vbar)| < delta and |p(vbar)-p(v+)| < delta
};

/// Evaluates both sides of each relative-quantity bound at (v, vbar). Range
/// violations are flagged, never thrown; only nonpositive volumes throw.
RelativeBoundsProbe relative_bounds_probe(const ModelParams& m, double v,
                                          double vbar, double v_plus,
                                          double delta);

}  // namespace nslab
