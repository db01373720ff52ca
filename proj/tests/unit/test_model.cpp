#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nslab/errors.hpp"
#include "nslab/model.hpp"

using namespace nslab;

namespace {
ModelParams gas(double g) {
  ModelParams m;
  m.gamma = g;
  return m;
}
}  // namespace

TEST_CASE("pressure and its derivatives at known points") {
  const ModelParams m2 = gas(2.0);
  CHECK(pressure(m2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pressure(m2, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(pressure_deriv(m2, 1.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(pressure_deriv2(m2, 1.0) == doctest::Approx(6.0).epsilon(1e-15));

  // 0.9^(-5/3) and (5/3) 0.9^(-8/3), 30-digit references.
  const ModelParams m = gas(5.0 / 3.0);
  CHECK(pressure(m, 0.9) == doctest::Approx(1.19196220321682686).epsilon(1e-14));
  CHECK(-pressure_deriv(m, 0.9) == doctest::Approx(2.20733741336449419).epsilon(1e-14));
}

TEST_CASE("nonpositive volume is a domain error") {
  const ModelParams m = gas(1.4);
  CHECK_THROWS_AS(pressure(m, 0.0), DomainError);
  CHECK_THROWS_AS(pressure_deriv(m, -1.0), DomainError);
  CHECK_THROWS_AS(internal_energy(m, 0.0), DomainError);
  CHECK_THROWS_AS(rel_entropy_density(m, {-0.1, 0.0}, {1.0, 0.0}), DomainError);
}

TEST_CASE("parameter validation") {
  ModelParams m;
  m.gamma = 1.0;
  CHECK_THROWS(m.validate());
  m.gamma = 1.4;
  m.b = 0.0;
  CHECK_THROWS(m.validate());
  m.b = 1.0;
  m.mu = -1.0;
  CHECK_THROWS(m.validate());
}

TEST_CASE("internal energy is the potential of -p") {
  CHECK(internal_energy(gas(2.0), 1.0) == doctest::Approx(1.0));
  CHECK(internal_energy(gas(2.0), 2.0) == doctest::Approx(0.5));
  for (double g : {1.4, 5.0 / 3.0, 3.0}) {
    for (double b : {1.0, 2.5}) {
      ModelParams m = gas(g);
      m.b = b;
      for (double v = 0.5; v <= 3.0; v += 0.125) {
        const double h = 1e-5;
        const double dq = (internal_energy(m, v + h) - internal_energy(m, v - h)) / (2 * h);
        CHECK(dq == doctest::Approx(-pressure(m, v)).epsilon(1e-9));
        const double dp = (pressure(m, v + h) - pressure(m, v - h)) / (2 * h);
        CHECK(dp == doctest::Approx(pressure_deriv(m, v)).epsilon(1e-8));
        CHECK(pressure_deriv(m, v) < 0.0);
        CHECK(pressure_deriv2(m, v) > 0.0);
      }
    }
  }
}

TEST_CASE("relative quantities") {
  const ModelParams m = gas(2.0);
  CHECK(relative_pressure(m, 2.0, 1.0) == doctest::Approx(1.25));
  CHECK(relative_internal_energy(m, 2.0, 1.0) == doctest::Approx(0.5));
  CHECK(relative_pressure(m, 1.3, 1.3) == 0.0);
  CHECK(relative_internal_energy(m, 1.3, 1.3) == 0.0);

  // The generic form agrees with the specialised ones away from the diagonal.
  auto p = [&](double v) { return pressure(m, v); };
  auto dp = [&](double v) { return pressure_deriv(m, v); };
  CHECK(relative_quantity(p, dp, 1.7, 0.8) == doctest::Approx(relative_pressure(m, 1.7, 0.8)));

  // Near the diagonal the specialised forms keep their relative accuracy:
  // p(v|w) ~ p''(w) (v-w)^2 / 2.
  const double w = 0.9, s = 1e-7;
  const double quad = 0.5 * pressure_deriv2(m, w) * s * s;
  CHECK(relative_pressure(m, w + s, w) == doctest::Approx(quad).epsilon(1e-6));
  CHECK(pressure_difference(m, w + s, w) == doctest::Approx(pressure_deriv(m, w) * s).epsilon(1e-6));
}

TEST_CASE("relative quantities are second order and Q is strictly convex") {
  const ModelParams m = gas(5.0 / 3.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> vol(0.5, 3.0);
  // sup p'' and sup Q'' = sup(-p') on [0.5, 3] sit at v = 0.5.
  const double p2 = pressure_deriv2(m, 0.5);
  const double q2 = -pressure_deriv(m, 0.5);
  for (int i = 0; i < 10000; ++i) {
    const double v = vol(rng), w = vol(rng);
    const double d2 = (v - w) * (v - w);
    const double q = relative_internal_energy(m, v, w);
    CHECK(q > 0.0);
    CHECK(q <= 0.5 * q2 * d2 * (1 + 1e-12));
    CHECK(std::abs(relative_pressure(m, v, w)) <= 0.5 * p2 * d2 * (1 + 1e-12));
  }
}

TEST_CASE("relative entropy density") {
  const ModelParams m = gas(2.0);
  CHECK(rel_entropy_density(m, {1.2, 0.3}, {1.2, 0.3}) == 0.0);
  CHECK(rel_entropy_density(m, {2.0, 1.0}, {1.0, 0.0}) == doctest::Approx(1.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> vol(0.5, 3.0), du(-2.0, 2.0);
  bool ok = true;
  for (int i = 0; i < 10000; ++i) {
    const double u = du(rng);
    ok = ok && rel_entropy_density(gas(1.4), {vol(rng), u}, {vol(rng), 0.0}) >= 0.0;
  }
  CHECK(ok);
}

TEST_CASE("relative bound probe: leading coefficients") {
  const ModelParams m = gas(5.0 / 3.0);
  for (double vbar : {0.9, 1.0, 1.3}) {
    const double cp = (m.gamma + 1) / (2 * m.gamma * pressure(m, vbar));
    const double cq = std::pow(pressure(m, vbar), -1 / m.gamma - 1) / (2 * m.gamma);
    double prev_err = 1e300;
    for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const RelativeBoundsProbe r = relative_bounds_probe(m, vbar + h, vbar, 1.0, 0.1);
      CHECK(r.p_upper.coefficient == doctest::Approx(cp).epsilon(1e-14));
      CHECK(r.q_upper.coefficient == doctest::Approx(cq).epsilon(1e-14));
      const double err = std::max(std::abs(r.p_upper.ratio / cp - 1), std::abs(r.q_upper.ratio / cq - 1));
      // Error is O(|v - vbar|).
      CHECK(err < 5.0 * h);
      CHECK(err < prev_err);
      prev_err = err;
    }
  }
}

TEST_CASE("relative bound probe: diagonal and range flags") {
  const ModelParams m = gas(5.0 / 3.0);
  const RelativeBoundsProbe d = relative_bounds_probe(m, 0.95, 0.95, 1.0, 0.1);
  CHECK(d.p_upper.lhs == 0.0);
  CHECK(d.p_upper.rhs == 0.0);
  CHECK(d.q_upper.lhs == 0.0);
  CHECK(d.q_lower.rhs == 0.0);

  const RelativeBoundsProbe far = relative_bounds_probe(m, 4.0, 0.95, 1.0, 0.1);
  CHECK_FALSE(far.range1_ok);
  CHECK_FALSE(far.range3_ok);
  CHECK_THROWS_AS(relative_bounds_probe(m, 0.0, 0.95, 1.0, 0.1), DomainError);
}

TEST_CASE("volume controlled by Q and p: infimum constant is stable") {
  // sup over the sample of |v - vbar|^2 / Q(v|vbar) on 0 < v < 3 v+, vbar in [0.9, 1.1].
  const ModelParams m = gas(5.0 / 3.0);
  auto sup_ratio = [&](int n) {
    double c = 0.0;
    for (int i = 1; i < n; ++i) {
      for (double vbar : {0.9, 1.0, 1.1}) {
        const double v = 3.0 * i / n;
        if (v == vbar) continue;
        c = std::max(c, relative_bounds_probe(m, v, vbar, 1.0, 0.1).c_volume_vs_q);
      }
    }
    return c;
  };
  const double c1 = sup_ratio(300), c2 = sup_ratio(600);
  CHECK(std::isfinite(c1));
  CHECK(c2 == doctest::Approx(c1).epsilon(0.02));
}
