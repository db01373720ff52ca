#include "nslab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nslab/dynamics.hpp"
#include "nslab/errors.hpp"
#include "nslab/model.hpp"

namespace nslab {

namespace {

// Central differences inside, one-sided at the two ends.
std::vector<double> first_difference(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  d[0] = (f[1] - f[0]) / dx;
  d[n - 1] = (f[n - 1] - f[n - 2]) / dx;
  return d;
}

std::vector<double> second_difference(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dx * dx);
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

}  // namespace

DiagnosticsRecord ledger(const SimState& s, const ShockProfile& profile, const SimGrid& grid) {
  const ModelParams& m = profile.params;
  const EndStates& e = profile.ends;
  const double cs = profile.constants.c_star;
  const double mu = m.mu;
  const std::size_t n = grid.n_nodes();
  if (s.v.size() != n || s.u.size() != n) throw UsageError("ledger: state does not match grid");

  const ShiftedProfile sh = shifted_eval(profile, grid.x, s.X);
  std::vector<double> z(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = s.v[i] - sh.v[i];
    w[i] = s.u[i] - sh.u[i];
  }
  const std::vector<double> z_x = first_difference(z, grid.dx);
  const std::vector<double> w_x = first_difference(w, grid.dx);
  const std::vector<double> w_xx = second_difference(w, grid.dx);

  enum Term {
    kARE, kG1, kGS, kDv, kDu1, kDu2, kY3, kY4, kI11, kI12, kB1, kB2, kB3, kB4, kB5, kB6,
    kCG1, kCG2, kCD, kQa, kYd, kH1, kCount
  };
  std::vector<std::vector<double>> f(kCount, std::vector<double>(n));
  double sup_v = 0.0, sup_u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = s.v[i];
    const double vt = sh.v[i];
    const double a = sh.a[i];
    const double ax = sh.a_x[i];
    const double utx = sh.u_x[i];
    const double vtx = sh.v_x[i];
    const double dp = pressure_difference(m, v, vt);
    const double q = relative_internal_energy(m, v, vt);
    const double eta = 0.5 * w[i] * w[i] + q;
    const double pp = pressure_deriv(m, vt);
    const double split = dp - w[i] / (2.0 * cs);

    f[kARE][i] = a * eta;
    f[kG1][i] = std::abs(ax) * split * split;
    f[kGS][i] = std::abs(vtx) * w[i] * w[i];
    f[kDv][i] = z_x[i] * z_x[i];
    f[kDu1][i] = w_x[i] * w_x[i];
    f[kDu2][i] = w_xx[i] * w_xx[i];
    f[kY3][i] = -a * pp * vtx * (z[i] + w[i] / e.sigma);
    f[kY4][i] = -ax * eta;
    f[kI11][i] = ax * dp * w[i];
    f[kI12][i] = -a * utx * relative_pressure(m, v, vt);
    f[kB1][i] = ax * w[i] * w[i] / (4.0 * cs);
    f[kB2][i] = -mu * ax * w[i] * w_x[i] / v;
    f[kB3][i] = mu * ax * w[i] * z[i] * utx / (v * vt);
    f[kB4][i] = mu * a * z[i] * w_x[i] * utx / (v * vt);
    f[kB5][i] = e.delta * ax * dp * dp;
    f[kB6][i] = ax * std::abs(dp * dp * dp);
    f[kCG1][i] = cs * ax * split * split;
    f[kCG2][i] = 0.5 * e.sigma * ax * w[i] * w[i];
    f[kCD][i] = mu * a * w_x[i] * w_x[i] / v;
    f[kQa][i] = ax * q;
    f[kYd][i] = -ax * eta + a * (utx * w[i] - pp * vtx * z[i]);
    f[kH1][i] = z[i] * z[i] + z_x[i] * z_x[i] + w[i] * w[i] + w_x[i] * w_x[i];
    sup_v = std::max(sup_v, std::abs(z[i]));
    sup_u = std::max(sup_u, std::abs(w[i]));
  }
  auto I = [&](Term k) { return grid.integrate(f[k]); };

  DiagnosticsRecord r;
  r.t = s.t;
  r.X = s.X;
  r.X_dot = s.X_dot;
  r.weighted_rel_entropy = I(kARE);
  r.G1 = I(kG1);
  r.GS = I(kGS);
  r.Dv = I(kDv);
  r.Du1 = I(kDu1);
  r.Du2 = I(kDu2);
  const ShiftIntegrals y12 = shift_integrals(s.u, s.X, profile, grid);
  r.Y1 = y12.y1;
  r.Y2 = y12.y2;
  r.Y3 = I(kY3);
  r.Y4 = I(kY4);
  r.B1 = I(kB1);
  r.B2 = I(kB2);
  r.B3 = I(kB3);
  r.B4 = I(kB4);
  r.B5 = I(kB5);
  r.B6 = I(kB6);
  r.curlyG1 = I(kCG1);
  r.curlyG2 = I(kCG2);
  r.curlyD = I(kCD);
  r.sup_norm_v = sup_v;
  r.sup_norm_u = sup_u;
  r.h1_perturbation = I(kH1);
  r.g = r.Dv + r.Du1;
  r.j_bad = I(kI11) + I(kI12) + r.B2 + r.B3 + r.B4;
  r.j_good = r.curlyG2 + e.sigma * I(kQa) + r.curlyD;
  r.y_direct = I(kYd);
  r.x_dot_recomputed = shift_rate(y12, profile);
  return r;
}

std::vector<double> energy_identity_residual(std::span<const DiagnosticsRecord> h) {
  const std::size_t n = h.size();
  if (n < 3) throw UsageError("energy_identity_residual: need at least 3 ticks");
  const double step = h[1].t - h[0].t;
  if (!(step > 0.0)) throw UsageError("energy_identity_residual: ticks must increase in time");
  for (std::size_t k = 1; k < n; ++k) {
    const double d = h[k].t - h[k - 1].t;
    if (std::abs(d - step) > 1e-6 * step) {
      throw UsageError("energy_identity_residual: tick cadence is not uniform");
    }
  }
  std::vector<double> res(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double dE = (h[k + 1].weighted_rel_entropy - h[k - 1].weighted_rel_entropy) /
                      (h[k + 1].t - h[k - 1].t);
    const double rhs = h[k].X_dot * h[k].y_sum() + h[k].j_bad - h[k].j_good;
    res[k] = std::abs(dE - rhs);
  }
  return res;
}

void finalize_history(std::vector<DiagnosticsRecord>& h, double delta) {
  if (h.empty()) return;
  if (h.size() >= 3) {
    const std::vector<double> res = energy_identity_residual(h);
    for (std::size_t k = 0; k < h.size(); ++k) h[k].identity_residual = res[k];
  }
  const std::vector<double> ratio = apriori_ratio(h, delta);
  for (std::size_t k = 0; k < h.size(); ++k) h[k].apriori_ratio = ratio[k];
}

double completion_of_square_check(std::span<const double> dp, std::span<const double> w,
                                  std::span<const double> a_x, double c_star) {
  if (!(c_star > 0.0)) throw UsageError("completion_of_square_check: C* must be positive");
  if (dp.size() != w.size() || dp.size() != a_x.size()) {
    throw UsageError("completion_of_square_check: size mismatch");
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    const double lhs = a_x[i] * (dp[i] * w[i] - c_star * dp[i] * dp[i]);
    const double sq = dp[i] - w[i] / (2.0 * c_star);
    const double rhs = a_x[i] * (-c_star * sq * sq + w[i] * w[i] / (4.0 * c_star));
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(a_x[i]) * (std::abs(dp[i] * w[i]) + c_star * dp[i] * dp[i] +
                                                w[i] * w[i] / (4.0 * c_star)));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double completion_of_square_check(const SimState& s, const ShockProfile& profile,
                                  const SimGrid& grid) {
  const ShiftedProfile sh = shifted_eval(profile, grid.x, s.X);
  const std::size_t n = grid.n_nodes();
  std::vector<double> dp(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    dp[i] = pressure_difference(profile.params, s.v[i], sh.v[i]);
    w[i] = s.u[i] - sh.u[i];
  }
  return completion_of_square_check(dp, w, sh.a_x, profile.constants.c_star);
}

PoincareResult poincare_check(std::span<const double> y, std::span<const double> f) {
  const std::size_t n = y.size();
  if (n < 3) throw UsageError("poincare_check: need at least 3 samples");
  if (f.size() != n) throw UsageError("poincare_check: size mismatch");
  if (y.front() < 0.0 || y.back() > 1.0) throw UsageError("poincare_check: y must lie in [0, 1]");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(y[i] > y[i - 1])) throw UsageError("poincare_check: y must be strictly increasing");
  }
  // Mean over [0, 1], with constant extension outside the sampled range.
  double mean = f.front() * y.front() + f.back() * (1.0 - y.back());
  for (std::size_t i = 1; i < n; ++i) mean += 0.5 * (y[i] - y[i - 1]) * (f[i] + f[i - 1]);

  PoincareResult r;
  const double g0 = f.front() - mean;
  const double gn = f.back() - mean;
  r.lhs = g0 * g0 * y.front() + gn * gn * (1.0 - y.back());
  // Antiderivative of y(1-y).
  auto W = [](double t) { return t * t * (0.5 - t / 3.0); };
  for (std::size_t i = 1; i < n; ++i) {
    const double h = y[i] - y[i - 1];
    const double a = f[i - 1] - mean;
    const double b = f[i] - mean;
    r.lhs += h * (a * a + a * b + b * b) / 3.0;
    const double slope = (f[i] - f[i - 1]) / h;
    r.rhs += 0.5 * slope * slope * (W(y[i]) - W(y[i - 1]));
  }
  return r;
}

YFrame y_frame(const SimState& s, const ShockProfile& profile, const SimGrid& grid) {
  const EndStates& e = profile.ends;
  if (!(e.delta > 0.0)) throw DomainError("y_frame: degenerate profile (delta = 0)");
  const ShiftedProfile sh = shifted_eval(profile, grid.x, s.X);
  YFrame out;
  double last = 0.0;
  for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
    const double y = (e.u_minus - sh.u[i]) / e.delta;
    const double jac = -sh.u_x[i] / e.delta;
    if (!(y > last) || !(y < 1.0) || !(jac > 0.0)) continue;
    out.y.push_back(y);
    out.f.push_back(s.u[i] - sh.u[i]);
    out.jacobian.push_back(jac);
    out.x.push_back(grid.x[i]);
    last = y;
  }
  return out;
}

namespace {

template <class Fn>
std::vector<double> running_time_integral(std::span<const DiagnosticsRecord> h, Fn fn) {
  std::vector<double> acc(h.size(), 0.0);
  for (std::size_t k = 1; k < h.size(); ++k) {
    acc[k] = acc[k - 1] + 0.5 * (h[k].t - h[k - 1].t) * (fn(h[k]) + fn(h[k - 1]));
  }
  return acc;
}

}  // namespace

DissipationIntegrals dissipation_integrals(std::span<const DiagnosticsRecord> h) {
  DissipationIntegrals d;
  d.dissipation =
      running_time_integral(h, [](const DiagnosticsRecord& r) { return r.Dv + r.Du1 + r.Du2; });
  d.good = running_time_integral(h, [](const DiagnosticsRecord& r) { return r.G1 + r.GS; });
  return d;
}

std::vector<double> apriori_ratio(std::span<const DiagnosticsRecord> h, double delta) {
  if (h.empty()) throw UsageError("apriori_ratio: empty history");
  const double h0 = h.front().h1_perturbation;
  if (!(h0 > 0.0)) return std::vector<double>(h.size(), 1.0);
  const std::vector<double> shift =
      running_time_integral(h, [](const DiagnosticsRecord& r) { return r.X_dot * r.X_dot; });
  const DissipationIntegrals d = dissipation_integrals(h);
  std::vector<double> out(h.size());
  double sup_h1 = 0.0, best = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    sup_h1 = std::max(sup_h1, h[k].h1_perturbation);
    const double num = sup_h1 + delta * shift[k] + d.good[k] + d.dissipation[k];
    best = std::max(best, num / h0);
    out[k] = best;
  }
  return out;
}

double contraction_slack(std::span<const DiagnosticsRecord> h) {
  if (h.empty()) return 0.0;
  const double e0 = h.front().weighted_rel_entropy;
  if (!(e0 > 0.0)) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < h.size(); ++k) {
    worst = std::max(worst, h[k].weighted_rel_entropy - h[k - 1].weighted_rel_entropy);
  }
  return worst / e0;
}

DiffusionProbe diffusion_coefficient_probe(const ShockProfile& p, double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 0.5)) throw UsageError("diffusion probe: cutoff must lie in (0, 1/2)");
  const ModelParams& m = p.params;
  const EndStates& e = p.ends;
  const double p1 = pressure_deriv(m, e.v_minus);
  const double p2 = pressure_deriv2(m, e.v_minus);
  // Inverse equation of state v(p) at p- = p(v-).
  const double dv_dp = 1.0 / p1;
  const double d2v_dp2 = -p2 / (p1 * p1 * p1);

  DiffusionProbe r;
  r.cutoff = cutoff;
  r.delta = e.delta;
  r.limit_value =
      e.sigma / (2.0 * p.constants.sigma_ell) * e.delta * d2v_dp2 / (dv_dp * dv_dp);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double y = (e.u_minus - p.u_tilde[i]) / e.delta;
    if (y < cutoff || y > 1.0 - cutoff) continue;
    const double dydx = -p.u_tilde_x[i] / e.delta;
    const double val = dydx / (y * (1.0 - y) * p.v_tilde[i]);
    r.max_deviation = std::max(r.max_deviation, std::abs(val - r.limit_value));
    ++r.samples;
  }
  r.ratio = r.max_deviation / (e.delta * e.delta);
  return r;
}

const std::string& diagnostics_csv_header() {
  static const std::string h =
      "t,X,X_dot,aRE,G1,GS,Dv,Du1,Du2,Y1,Y2,Y3,Y4,B1,B2,B3,B4,B5,B6,cG1,cG2,cD,id_residual,"
      "sup_v,sup_u,h1,g,apriori_ratio";
  return h;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  const double vals[] = {r.t,   r.X,   r.X_dot, r.weighted_rel_entropy, r.G1, r.GS, r.Dv,
                         r.Du1, r.Du2, r.Y1,    r.Y2,  r.Y3,  r.Y4,  r.B1,  r.B2,
                         r.B3,  r.B4,  r.B5,    r.B6,  r.curlyG1, r.curlyG2, r.curlyD,
                         r.identity_residual, r.sup_norm_v, r.sup_norm_u, r.h1_perturbation,
                         r.g, r.apriori_ratio};
  std::string out;
  char buf[32];
  bool first = true;
  for (double v : vals) {
    if (!first) out += ',';
    first = false;
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
  return out;
}

}  // namespace nslab
