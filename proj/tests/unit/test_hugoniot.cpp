#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nslab/errors.hpp"
#include "nslab/hugoniot.hpp"

using namespace nslab;

namespace {
ModelParams gas(double g) {
  ModelParams m;
  m.gamma = g;
  return m;
}
const ModelParams kGas = gas(5.0 / 3.0);
}  // namespace

TEST_CASE("shock speed") {
  // sqrt((0.9^(-5/3) - 1) / 0.1), 30-digit reference.
  CHECK(shock_speed(kGas, 0.9, 1.0) == doctest::Approx(1.38550425194882337).epsilon(1e-14));
  CHECK(shock_speed(gas(2.0), 0.5, 1.0) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));

  const double s = shock_speed(kGas, 0.9, 1.0);
  const double quotient = -(pressure(kGas, 1.0) - pressure(kGas, 0.9)) / 0.1;
  CHECK(std::abs(s * s - quotient) <= 1e-14 * quotient);

  // Weak-shock limit approaches the sound speed at v+.
  const double c = std::sqrt(-pressure_deriv(kGas, 1.0));
  CHECK(shock_speed(kGas, 1.0 - 1e-7, 1.0) == doctest::Approx(c).epsilon(1e-6));
}

TEST_CASE("shock speed rejects inadmissible states") {
  CHECK_THROWS_AS(shock_speed(kGas, 1.0, 0.9), InvalidShock);
  CHECK_THROWS_AS(shock_speed(kGas, 1.0, 1.0), InvalidShock);
  CHECK_THROWS_AS(shock_speed(kGas, -0.1, 1.0), DomainError);
}

TEST_CASE("left state on the 2-shock curve") {
  const EndStates e = left_state_from_right(kGas, 1.0, 0.0, 0.1);
  CHECK(e.v_minus == doctest::Approx(0.9));
  CHECK(e.u_minus == doctest::Approx(0.138550425194882337).epsilon(1e-14));
  CHECK(e.delta == doctest::Approx(0.138550425194882337).epsilon(1e-14));
  CHECK(e.v_minus < e.v_plus);
  CHECK(e.u_minus > e.u_plus);
  CHECK(rh_residual(kGas, e).max_relative() <= 1e-12);
  CHECK_NOTHROW(validate_end_states(kGas, e));

  const EndStates tiny = left_state_from_right(kGas, 1.0, 0.3, 1e-8);
  CHECK(tiny.delta < 1e-7);
  CHECK(tiny.u_minus == doctest::Approx(0.3));

  CHECK_THROWS_AS(left_state_from_right(kGas, 1.0, 0.0, 0.0), InvalidShock);
  CHECK_THROWS_AS(left_state_from_right(kGas, 1.0, 0.0, 1.0), InvalidShock);
}

TEST_CASE("corrupted end states fail validation") {
  EndStates e = left_state_from_right(kGas, 1.0, 0.0, 0.1);
  e.u_minus += 1e-6;
  CHECK_THROWS_AS(validate_end_states(kGas, e), InvalidShock);
}

TEST_CASE("delta is monotone in delta_v and inverts by bisection") {
  double prev = 0.0;
  for (double dv = 0.01; dv < 0.99; dv += 0.01) {
    const double d = left_state_from_right(kGas, 1.0, 0.0, dv).delta;
    CHECK(d > prev);
    prev = d;
  }
  for (double d : {0.2, 0.1, 0.05, 0.025}) {
    const double dv = delta_v_for_strength(kGas, 1.0, d);
    CHECK(left_state_from_right(kGas, 1.0, 0.0, dv).delta == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("O(1) constants") {
  const EndStates e = left_state_from_right(kGas, 1.0, 0.0, 0.1);
  const ShockConstants c = o1_constants(kGas, e);
  // 30-digit references for v- = 0.9.
  CHECK(c.sigma_ell == doctest::Approx(1.48571108004365848).epsilon(1e-14));
  CHECK(c.alpha_ell == doctest::Approx(0.451744777501633105).epsilon(1e-14));
  CHECK(c.c_star == doctest::Approx(0.0867167543412062397).epsilon(1e-12));
  CHECK(c.m_shift == doctest::Approx(50.0 / 27.0).epsilon(1e-14));

  const double p1 = pressure_deriv(kGas, 0.9), p2 = pressure_deriv2(kGas, 0.9);
  CHECK(std::abs(c.alpha_ell * 2 * p1 * p1 * c.sigma_ell - p2) <= 1e-12 * p2);
  CHECK(alpha_ell_from_derivatives(kGas, 0.9) == doctest::Approx(c.alpha_ell).epsilon(1e-13));
  CHECK(std::pow(c.sigma_ell, 3) * c.alpha_ell ==
        doctest::Approx((1 + kGas.gamma) / (2 * 0.9)).epsilon(1e-13));
}

TEST_CASE("C* tends to 1/(2 sigma_ell) for weak shocks") {
  const EndStates e = left_state_from_right(kGas, 1.0, 0.0, 1e-10);
  const ShockConstants c = o1_constants(kGas, e);
  CHECK(c.c_star == doctest::Approx(0.5 / c.sigma_ell).epsilon(1e-4));
}

TEST_CASE("strong shocks are rejected where C* <= 0") {
  CHECK_THROWS_AS(o1_constants(kGas, left_state_from_right(kGas, 1.0, 0.0, 0.5)), ShockTooStrong);
}

TEST_CASE("speed gap is O(delta)") {
  double lo = 1e300, hi = 0.0;
  for (double d : {0.2, 0.1, 0.05, 0.025}) {
    const EndStates e = left_state_from_right(kGas, 1.0, 0.0, delta_v_for_strength(kGas, 1.0, d));
    const double sl = std::sqrt(-pressure_deriv(kGas, e.v_minus));
    const double ratio = std::abs(e.sigma - sl) / e.delta;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi < 1.0);
  CHECK(hi / lo < 1.5);
}
