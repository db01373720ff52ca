#pragma once

// Rankine-Hugoniot data for a 2-shock and the O(1) constants derived from it.

#include "nslab/model.hpp"

namespace nslab {

struct EndStates {
  double v_minus = 0.9;
  double v_plus = 1.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
  double sigma = 0.0;  ///< shock speed, > 0
  double delta = 0.0;  ///< shock strength |u- - u+|
};

struct ShockConstants {
  double sigma_ell = 0.0;  ///< sqrt(-p'(v-))
  double alpha_ell = 0.0;  ///< (gamma+1) / (2 gamma sigma_ell p(v-))
  double c_star = 0.0;     ///< coefficient of the completed square
  double m_shift = 0.0;    ///< M = 5 sigma_ell^3 alpha_ell / 4
};

/// sqrt(-(p(v+) - p(v-)) / (v+ - v-)). Requires 0 < v- < v+.
double shock_speed(const ModelParams& m, double v_minus, double v_plus);

/// Left state on the 2-shock curve through (v+, u+) with v- = v+ - delta_v.
EndStates left_state_from_right(const ModelParams& m, double v_plus, double u_plus,
                                double delta_v);

/// Inverse of delta_v -> delta along the 2-shock curve (bisection).
double delta_v_for_strength(const ModelParams& m, double v_plus, double delta);

/// The two Rankine-Hugoniot residuals, mass then momentum.
struct RhResidual {
  double mass = 0.0;
  double momentum = 0.0;
  double max_relative() const;
  double scale = 1.0;
};
RhResidual rh_residual(const ModelParams& m, const EndStates& e);

/// Throws InvalidShock when entropy condition or RH relations fail.
void validate_end_states(const ModelParams& m, const EndStates& e);

/// Throws ShockTooStrong when C* <= 0.
ShockConstants o1_constants(const ModelParams& m, const EndStates& e);

/// alpha_ell computed from the second form, p''(v-) / (2 |p'(v-)|^2 sigma_ell).
double alpha_ell_from_derivatives(const ModelParams& m, double v_minus);

}  // namespace nslab
