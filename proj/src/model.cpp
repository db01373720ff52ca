#include "nslab/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nslab/errors.hpp"

namespace nslab {

namespace {

void require_positive_volume(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + ": specific volume must be positive, got " +
                      std::to_string(v));
  }
}

// (1+s)^alpha - 1 - alpha*s, accurate for small |s| (series) and large |s|.
double power_gap(double s, double alpha) {
  if (std::abs(s) < 0.1) {
    double coeff = alpha * (alpha - 1.0) / 2.0;
    double sk = s * s;
    double sum = coeff * sk;
    for (int k = 3; k < 80; ++k) {
      coeff *= (alpha - k + 1.0) / k;
      sk *= s;
      const double term = coeff * sk;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(alpha * std::log1p(s)) - alpha * s;
}

}  // namespace

void ModelParams::validate() const {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("gamma must be > 1");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("b must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be > 0");
}

double pressure(const ModelParams& m, double v) {
  require_positive_volume(v, "pressure");
  return m.b * std::pow(v, -m.gamma);
}

double pressure_deriv(const ModelParams& m, double v) {
  require_positive_volume(v, "pressure_deriv");
  return -m.gamma * m.b * std::pow(v, -m.gamma - 1.0);
}

double pressure_deriv2(const ModelParams& m, double v) {
  require_positive_volume(v, "pressure_deriv2");
  return m.gamma * (m.gamma + 1.0) * m.b * std::pow(v, -m.gamma - 2.0);
}

double lagrangian_sound_speed(const ModelParams& m, double v) {
  return std::sqrt(-pressure_deriv(m, v));
}

double internal_energy(const ModelParams& m, double v) {
  require_positive_volume(v, "internal_energy");
  return m.b * std::pow(v, 1.0 - m.gamma) / (m.gamma - 1.0);
}

double pressure_difference(const ModelParams& m, double v, double w) {
  require_positive_volume(v, "pressure_difference");
  require_positive_volume(w, "pressure_difference");
  const double s = (v - w) / w;
  return pressure(m, w) * std::expm1(-m.gamma * std::log1p(s));
}

double relative_quantity(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double v,
                         double w) {
  return f(v) - f(w) - df(w) * (v - w);
}

double relative_pressure(const ModelParams& m, double v, double w) {
  require_positive_volume(v, "relative_pressure");
  require_positive_volume(w, "relative_pressure");
  return pressure(m, w) * power_gap((v - w) / w, -m.gamma);
}

double relative_internal_energy(const ModelParams& m, double v, double w) {
  require_positive_volume(v, "relative_internal_energy");
  require_positive_volume(w, "relative_internal_energy");
  return internal_energy(m, w) * power_gap((v - w) / w, 1.0 - m.gamma);
}

double rel_entropy_density(const ModelParams& m, FlowState U, FlowState Ubar) {
  const double du = U.u - Ubar.u;
  return 0.5 * du * du + relative_internal_energy(m, U.v, Ubar.v);
}

RelativeBoundsProbe relative_bounds_probe(const ModelParams& m, double v,
                                          double vbar, double v_plus,
                                          double delta) {
  require_positive_volume(v, "relative_bounds_probe");
  require_positive_volume(vbar, "relative_bounds_probe");
  require_positive_volume(v_plus, "relative_bounds_probe");

  RelativeBoundsProbe r;
  const double g = m.gamma;
  const double dv = v - vbar;
  const double dv2 = dv * dv;
  const double p_rel = relative_pressure(m, v, vbar);
  const double q_rel = relative_internal_energy(m, v, vbar);
  const double dp = pressure_difference(m, v, vbar);
  const double dp2 = dp * dp;
  const double pbar = pressure(m, vbar);

  r.range1_ok = vbar < 2.0 * v_plus && v < 3.0 * v_plus;
  r.range2_ok = v > 0.5 * v_plus && vbar > 0.5 * v_plus;
  r.range3_ok = std::abs(dp) < delta &&
                std::abs(pressure_difference(m, vbar, v_plus)) < delta;

  if (dv2 > 0.0) {
    r.c_volume_vs_q = dv2 / q_rel;
    r.c_volume_vs_p = dv2 / p_rel;
    r.c_lipschitz = std::abs(dp) / std::abs(dv);
  }

  // The explicit coefficients are stated for b = 1; for general b they are
  // applied to the normalized pressure p/b and rescaled.
  const double pn = pbar / m.b;
  const double dpn = dp / m.b;
  const double coef_p = (g + 1.0) / (2.0 * g * pbar);
  const double coef_q = std::pow(pn, -1.0 / g - 1.0) / (2.0 * g * m.b);
  const double cubic =
      m.b * (1.0 + g) / (3.0 * g * g) * std::pow(pn, -1.0 / g - 2.0) * dpn * dpn * dpn;

  auto fill = [&](BoundProbe& bp, double lhs, double coef, double rhs) {
    bp.lhs = lhs;
    bp.coefficient = coef;
    bp.rhs = rhs;
    if (dp2 > 0.0) {
      bp.ratio = lhs / dp2;
      if (delta > 0.0) bp.implied_c = std::max(0.0, (bp.ratio - coef) / delta);
    }
  };
  fill(r.p_upper, p_rel, coef_p, coef_p * dp2);
  fill(r.q_lower, q_rel, coef_q, coef_q * dp2 - cubic);
  fill(r.q_upper, q_rel, coef_q, coef_q * dp2);
  return r;
}

}  // namespace nslab
