#include "nslab/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "nslab/errors.hpp"

namespace nslab {

namespace {

namespace odeint = boost::numeric::odeint;
using Deviation = std::array<double, 1>;

// Bracket sigma^2 (v - v-) + p(v) - p(v-) written around the far-field state
// `anchor` (v- or v+) in terms of w = v - anchor. Both forms agree through the
// Rankine-Hugoniot relation; the anchored form keeps B(anchor) = 0 exactly.
double bracket(const ModelParams& m, const EndStates& e, double anchor, double w) {
  const double dp = pressure(m, anchor) * std::expm1(-m.gamma * std::log1p(w / anchor));
  return e.sigma * e.sigma * w + dp;
}

struct RhsDerivs {
  double f = 0.0;    // v'
  double fp = 0.0;   // dF/dv
  double fpp = 0.0;  // d2F/dv2
};

RhsDerivs rhs_derivs(const ModelParams& m, const EndStates& e, double anchor, double w) {
  const double v = anchor + w;
  const double k = 1.0 / (e.sigma * m.mu);
  const double B = bracket(m, e, anchor, w);
  const double dB = e.sigma * e.sigma + pressure_deriv(m, v);
  const double d2B = pressure_deriv2(m, v);
  return {-k * v * B, -k * (B + v * dB), -k * (2.0 * dB + v * d2B)};
}

double hermite(double y0, double y1, double m0, double m1, double h, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

}  // namespace

double profile_rhs(const ModelParams& m, const EndStates& e, double v) {
  if (!(v >= e.v_minus && v <= e.v_plus)) {
    std::ostringstream os;
    os << "profile_rhs: v = " << v << " outside [" << e.v_minus << ", " << e.v_plus << "]";
    throw DomainError(os.str());
  }
  if (v == e.v_minus || v == e.v_plus) return 0.0;
  const double mid = 0.5 * (e.v_minus + e.v_plus);
  const double anchor = v >= mid ? e.v_plus : e.v_minus;
  return rhs_derivs(m, e, anchor, v - anchor).f;
}

double default_half_length(const ShockConstants& c, const EndStates& e, double misfit_tol) {
  return 30.0 / (c.sigma_ell * e.delta) * std::max(1.0, std::abs(std::log(misfit_tol)) / 10.0);
}

ShockProfile solve_profile(const ModelParams& m, const EndStates& e,
                           const ProfileOptions& opts) {
  m.validate();
  ShockProfile prof;
  prof.params = m;
  prof.ends = e;
  prof.constants = o1_constants(m, e);

  if (opts.n_samples < 64) throw UsageError("solve_profile: n_samples must be >= 64");
  const std::size_t n = opts.n_samples % 2 == 1 ? opts.n_samples : opts.n_samples + 1;
  const std::size_t c = n / 2;
  const double L = opts.half_length > 0.0
                       ? opts.half_length
                       : default_half_length(prof.constants, e, opts.misfit_tol);
  const double h = L / static_cast<double>(c);
  prof.half_length = L;
  prof.spacing = h;

  prof.xi.resize(n);
  prof.deviation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.xi[i] = (static_cast<double>(i) - static_cast<double>(c)) * h;
  }

  std::vector<double> times(c + 1);
  for (std::size_t k = 0; k <= c; ++k) times[k] = static_cast<double>(k) * h;

  const double half_jump = 0.5 * (e.v_plus - e.v_minus);
  // side = +1 integrates xi >= 0 around v+, side = -1 integrates s = -xi around v-.
  auto integrate_half = [&](int side) {
    const double anchor = side > 0 ? e.v_plus : e.v_minus;
    auto sys = [&](const Deviation& w, Deviation& dwdt, double) {
      dwdt[0] = side * rhs_derivs(m, e, anchor, w[0]).f;
    };
    Deviation w0{side > 0 ? -half_jump : half_jump};
    std::size_t k = 0;
    auto observer = [&](const Deviation& w, double) {
      const std::size_t idx = side > 0 ? c + k : c - k;
      prof.deviation[idx] = w[0];
      ++k;
    };
    auto stepper = odeint::make_dense_output(1e-300, opts.rel_tol,
                                             odeint::runge_kutta_dopri5<Deviation>());
    try {
      odeint::integrate_times(stepper, sys, w0, times.begin(), times.end(), 0.1 * h,
                              observer);
    } catch (const std::exception& ex) {
      throw SolverFailure(std::string("solve_profile: integration stalled: ") + ex.what());
    }
    if (k != c + 1) throw SolverFailure("solve_profile: integrator skipped output samples");
  };
  integrate_half(+1);
  const double center_dev_right = prof.deviation[c];
  integrate_half(-1);
  // The center belongs to the right half; both halves start from the midpoint.
  prof.deviation[c] = center_dev_right;

  prof.v_tilde.resize(n);
  prof.u_tilde.resize(n);
  prof.v_tilde_x.resize(n);
  prof.u_tilde_x.resize(n);
  prof.v_tilde_xx.resize(n);
  prof.u_tilde_xx.resize(n);
  prof.v_tilde_xxx.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double anchor = i >= c ? e.v_plus : e.v_minus;
    const double w = prof.deviation[i];
    if (!std::isfinite(w)) throw SolverFailure("solve_profile: non-finite profile value");
    const RhsDerivs d = rhs_derivs(m, e, anchor, w);
    const double v = anchor + w;
    prof.v_tilde[i] = v;
    prof.u_tilde[i] = e.u_minus - e.sigma * (v - e.v_minus);
    prof.v_tilde_x[i] = d.f;
    prof.v_tilde_xx[i] = d.fp * d.f;
    prof.v_tilde_xxx[i] = (d.fpp * d.f + d.fp * d.fp) * d.f;
    prof.u_tilde_x[i] = -e.sigma * prof.v_tilde_x[i];
    prof.u_tilde_xx[i] = -e.sigma * prof.v_tilde_xx[i];
  }
  // The center is pinned exactly to the midpoint.
  prof.v_tilde[c] = 0.5 * (e.v_minus + e.v_plus);
  prof.u_tilde[c] = e.u_minus - e.sigma * (prof.v_tilde[c] - e.v_minus);

  prof.misfit_left = std::abs(prof.deviation.front());
  prof.misfit_right = std::abs(prof.deviation.back());
  if (prof.far_field_misfit() > opts.misfit_tol) {
    std::ostringstream os;
    os << "solve_profile: far-field misfit " << prof.far_field_misfit()
       << " exceeds tolerance " << opts.misfit_tol << " at half-length " << L;
    throw SolverFailure(os.str());
  }
  return prof;
}

WeightFn build_weight(const ShockProfile& p) {
  const EndStates& e = p.ends;
  const double sd = std::sqrt(e.delta);
  WeightFn w;
  w.a.resize(p.size());
  w.a_x.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = 1.0 + (e.u_minus - p.u_tilde[i]) / sd;
    w.a[i] = std::clamp(a, 1.0, 1.0 + sd);
    w.a_x[i] = e.sigma * p.v_tilde_x[i] / sd;
  }
  return w;
}

ProfilePoint profile_at(const ShockProfile& p, double q) {
  const double xi0 = p.xi.front();
  const double xi1 = p.xi.back();
  if (q <= xi0) return {p.ends.v_minus, 0.0, 0.0};
  if (q >= xi1) return {p.ends.v_plus, 0.0, 0.0};

  const double h = p.spacing;
  const std::size_t last = p.size() - 1;
  double pos = (q - xi0) / h;
  // Abscissae that are nodes up to rounding return the stored samples.
  const double node = std::round(pos);
  if (std::abs(pos - node) <= 1e-9) {
    const auto k = static_cast<std::size_t>(node);
    return {p.v_tilde[k], p.v_tilde_x[k], p.v_tilde_xx[k]};
  }
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= last) i = last - 1;
  const double t = pos - static_cast<double>(i);

  const double y0 = p.v_tilde[i];
  const double y1 = p.v_tilde[i + 1];
  double m0 = p.v_tilde_x[i];
  double m1 = p.v_tilde_x[i + 1];
  // Fritsch-Carlson limiting keeps the interpolant of v_tilde monotone.
  const double secant = (y1 - y0) / h;
  if (secant == 0.0) {
    m0 = m1 = 0.0;
  } else {
    const double al = m0 / secant;
    const double be = m1 / secant;
    const double r2 = al * al + be * be;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m0 *= tau;
      m1 *= tau;
    }
  }
  ProfilePoint pt;
  pt.v = hermite(y0, y1, m0, m1, h, t);
  pt.v_x = hermite(p.v_tilde_x[i], p.v_tilde_x[i + 1], p.v_tilde_xx[i],
                   p.v_tilde_xx[i + 1], h, t);
  pt.v_xx = hermite(p.v_tilde_xx[i], p.v_tilde_xx[i + 1], p.v_tilde_xxx[i],
                    p.v_tilde_xxx[i + 1], h, t);
  return pt;
}

ShiftedProfile shifted_eval(const ShockProfile& p, std::span<const double> x,
                            double shift) {
  const EndStates& e = p.ends;
  const double sd = std::sqrt(e.delta);
  const std::size_t n = x.size();
  ShiftedProfile s;
  s.v.resize(n);
  s.u.resize(n);
  s.v_x.resize(n);
  s.u_x.resize(n);
  s.u_xx.resize(n);
  s.a.resize(n);
  s.a_x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const ProfilePoint pt = profile_at(p, x[j] - shift);
    s.v[j] = pt.v;
    s.u[j] = e.u_minus - e.sigma * (pt.v - e.v_minus);
    s.v_x[j] = pt.v_x;
    s.u_x[j] = -e.sigma * pt.v_x;
    s.u_xx[j] = -e.sigma * pt.v_xx;
    s.a[j] = std::clamp(1.0 + (e.u_minus - s.u[j]) / sd, 1.0, 1.0 + sd);
    s.a_x[j] = e.sigma * pt.v_x / sd;
  }
  return s;
}

TailFit tail_fit(const ShockProfile& p, bool right_side) {
  const std::size_t c = p.center_index();
  const std::size_t n = p.size();
  std::size_t lo, hi;
  if (right_side) {
    lo = c + c / 2;
    hi = n;
  } else {
    lo = 0;
    hi = c / 2 + 1;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  double cnt = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = std::abs(p.deviation[i]);
    if (!(d > 0.0)) continue;
    const double xv = p.xi[i];
    const double yv = std::log(d);
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
    syy += yv * yv;
    cnt += 1;
  }
  TailFit f;
  if (cnt < 3) return f;
  const double cov = sxy - sx * sy / cnt;
  const double varx = sxx - sx * sx / cnt;
  const double vary = syy - sy * sy / cnt;
  f.slope = cov / varx;
  f.r_squared = vary > 0.0 ? cov * cov / (varx * vary) : 1.0;
  return f;
}

void write_profile_csv(std::ostream& os, const ShockProfile& p) {
  const WeightFn w = build_weight(p);
  os << "xi,v_tilde,u_tilde,v_tilde_x,u_tilde_x,u_tilde_xx,a,a_x\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << p.xi[i] << ',' << p.v_tilde[i] << ',' << p.u_tilde[i] << ',' << p.v_tilde_x[i]
       << ',' << p.u_tilde_x[i] << ',' << p.u_tilde_xx[i] << ',' << w.a[i] << ','
       << w.a_x[i] << '\n';
  }
}

}  // namespace nslab
