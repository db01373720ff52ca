#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "nslab/errors.hpp"
#include "nslab/functionals.hpp"
#include "nslab/simulation.hpp"

using namespace nslab;

namespace {
const ModelParams kGas{};
const EndStates kEnds = left_state_from_right(kGas, 1.0, 0.0, 0.1);

std::shared_ptr<const ShockProfile> reference() {
  static const auto p = std::make_shared<const ShockProfile>(solve_profile(kGas, kEnds));
  return p;
}

// Profile shifted by X plus Gaussian bumps of the given amplitudes.
SimState bumped(const SimGrid& g, double X, double av, double au, double width = 4.0) {
  const ShiftedProfile sh = shifted_eval(*reference(), g.x, X);
  SimState s;
  s.X = X;
  s.v = sh.v;
  s.u = sh.u;
  for (std::size_t i = 1; i + 1 < g.n_nodes(); ++i) {
    const double b = std::exp(-0.5 * (g.x[i] / width) * (g.x[i] / width));
    s.v[i] += av * b;
    s.u[i] += au * b;
  }
  s.X_dot = shift_rate(s, *reference(), g);
  return s;
}

SimConfig short_config(std::size_t n_cells, double t_end) {
  SimConfig c;
  c.n_cells = n_cells;
  c.t_end = t_end;
  c.output_every = 5;
  c.perturbation.shape = PerturbationShape::gaussian_bump;
  c.perturbation.amplitude_v = 0.004;
  c.perturbation.amplitude_u = -0.0056;
  c.perturbation.width = 4.0;
  return c;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}
}  // namespace

TEST_CASE("ledger vanishes on the shifted profile") {
  const SimGrid g = SimGrid::uniform(-400, 400, 2048);
  const DiagnosticsRecord r = ledger(bumped(g, 0.8, 0.0, 0.0), *reference(), g);
  for (double v : {r.weighted_rel_entropy, r.G1, r.GS, r.Dv, r.Du1, r.Du2, r.Y1, r.Y2, r.Y3, r.Y4,
                   r.B1, r.B2, r.B3, r.B4, r.B5, r.B6, r.curlyG1, r.curlyG2, r.curlyD, r.sup_norm_v,
                   r.sup_norm_u, r.h1_perturbation, r.g, r.j_bad, r.j_good, r.y_direct}) {
    CHECK(v == 0.0);
  }
}

TEST_CASE("ledger term structure") {
  const SimGrid g = SimGrid::uniform(-400, 400, 2048);
  const DiagnosticsRecord r = ledger(bumped(g, 0.0, 0.003, 0.0), *reference(), g);
  CHECK(r.GS == 0.0);
  CHECK(r.Du1 == 0.0);
  CHECK(r.Du2 == 0.0);
  CHECK(r.Dv > 0.0);
  CHECK(r.g == r.Dv + r.Du1);
}

TEST_CASE("ledger consistency on a perturbed state") {
  const SimGrid g = SimGrid::uniform(-400, 400, 4096);
  const SimState s = bumped(g, -0.3, 0.004, -0.002);
  const DiagnosticsRecord r = ledger(s, *reference(), g);
  for (double v : {r.weighted_rel_entropy, r.G1, r.GS, r.Dv, r.Du1, r.Du2, r.curlyG1, r.curlyG2, r.curlyD}) {
    CHECK(v > 0.0);
  }
  CHECK(r.x_dot_recomputed == s.X_dot);
  CHECK(r.g == r.Dv + r.Du1);
  const double scale = std::abs(r.Y1) + std::abs(r.Y2) + std::abs(r.Y3) + std::abs(r.Y4);
  CHECK(std::abs(r.y_sum() - r.y_direct) <= 1e-13 * scale);
  // The good term curly G1 is C* times G1 (a_x > 0).
  CHECK(r.curlyG1 == doctest::Approx(reference()->constants.c_star * r.G1).epsilon(1e-13));
  CHECK(r.B1 == doctest::Approx(r.curlyG2 / (2 * reference()->constants.c_star * kEnds.sigma)).epsilon(1e-13));
}

TEST_CASE("curly G2 against an independent Simpson quadrature at double resolution") {
  const SimGrid g = SimGrid::uniform(-400, 400, 4096);
  const double au = 0.003, width = 5.0;
  const DiagnosticsRecord r = ledger(bumped(g, 0.0, 0.0, au, width), *reference(), g);

  const std::size_t n = 2 * 4096;
  const double h = 800.0 / double(n);
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = -400.0 + h * double(i);
  const ShiftedProfile sh = shifted_eval(*reference(), x, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = au * std::exp(-0.5 * (x[i] / width) * (x[i] / width));
    const double f = 0.5 * kEnds.sigma * sh.a_x[i] * w * w;
    const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += wt * f;
  }
  acc *= h / 3.0;
  CHECK(r.curlyG2 == doctest::Approx(acc).epsilon(1e-5));
}

TEST_CASE("completion of the square") {
  const double cs = reference()->constants.c_star;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> dp(1000), w(1000), ax(1000);
  for (std::size_t i = 0; i < 1000; ++i) {
    dp[i] = u(rng);
    w[i] = u(rng);
    ax[i] = std::abs(u(rng));
  }
  CHECK(completion_of_square_check(dp, w, ax, cs) <= 1e-12);

  // Expanding both sides symbolically: each equals a_x (dp w - C* dp^2).
  for (std::size_t i = 0; i < 10; ++i) {
    const double lhs = ax[i] * (dp[i] * w[i] - cs * dp[i] * dp[i]);
    const double sq = dp[i] - w[i] / (2 * cs);
    CHECK(lhs == doctest::Approx(ax[i] * (-cs * sq * sq + w[i] * w[i] / (4 * cs))).epsilon(1e-10));
  }

  // At the root dp = w/(2C*) the squared term, and so the G1 integrand, vanishes.
  const SimGrid g = SimGrid::uniform(-400, 400, 2048);
  SimState s = bumped(g, 0.0, 0.0, 0.002);
  const ShiftedProfile sh = shifted_eval(*reference(), g.x, 0.0);
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    const double target = pressure(kGas, sh.v[i]) + (s.u[i] - sh.u[i]) / (2 * cs);
    s.v[i] = std::pow(target, -1.0 / kGas.gamma);
  }
  const DiagnosticsRecord r = ledger(s, *reference(), g);
  CHECK(r.G1 <= 1e-12 * r.GS);
  CHECK(completion_of_square_check(bumped(g, 0.2, 0.004, -0.003), *reference(), g) <= 1e-12);
  CHECK_THROWS_AS(completion_of_square_check(dp, w, ax, 0.0), UsageError);
}

TEST_CASE("poincare check: exact cases") {
  std::vector<double> y(101), c(101, 2.5);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = double(i) / 100.0;
  const PoincareResult k = poincare_check(y, c);
  CHECK(k.lhs == doctest::Approx(0.0));
  CHECK(k.rhs == 0.0);

  std::vector<double> yy(10000);
  for (std::size_t i = 0; i < yy.size(); ++i) yy[i] = double(i) / double(yy.size() - 1);
  const PoincareResult aff = poincare_check(yy, yy);
  CHECK(aff.lhs == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(aff.rhs == doctest::Approx(1.0 / 12.0).epsilon(1e-12));

  CHECK_THROWS_AS(poincare_check(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 2}), UsageError);
  CHECK_THROWS_AS(poincare_check(std::vector<double>{0.1, 0.3, 0.2}, std::vector<double>{1, 2, 3}), UsageError);
  CHECK_THROWS_AS(poincare_check(std::vector<double>{0.1, 0.3, 1.2}, std::vector<double>{1, 2, 3}), UsageError);
}

TEST_CASE("poincare check: random piecewise-linear functions") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + trial % 40;
    std::vector<double> y(n), f(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (double(i) + 0.5 * u(rng)) / double(n);
    for (auto& v : f) v = 2 * u(rng) - 1;
    const PoincareResult r = poincare_check(y, f);
    CHECK(r.lhs <= r.rhs);

    if (trial % 100 == 0) {
      // Fine-grid midpoint quadrature of both sides.
      auto fval = [&](double t, double& slope) {
        if (t <= y.front()) { slope = 0; return f.front(); }
        if (t >= y.back()) { slope = 0; return f.back(); }
        const std::size_t k = std::upper_bound(y.begin(), y.end(), t) - y.begin();
        slope = (f[k] - f[k - 1]) / (y[k] - y[k - 1]);
        return f[k - 1] + slope * (t - y[k - 1]);
      };
      const int m = 200000;
      double mean = 0, sq = 0, wd = 0, s = 0;
      for (int i = 0; i < m; ++i) {
        const double t = (i + 0.5) / m;
        const double v = fval(t, s);
        mean += v / m;
        sq += v * v / m;
        wd += 0.5 * t * (1 - t) * s * s / m;
      }
      CHECK(r.lhs == doctest::Approx(sq - mean * mean).epsilon(1e-4));
      CHECK(r.rhs == doctest::Approx(wd).epsilon(1e-4));
    }
  }
}

TEST_CASE("y frame") {
  const SimGrid g = SimGrid::uniform(-400, 400, 8192);
  const SimState s = bumped(g, 0.5, 0.002, 0.003);
  const YFrame yf = y_frame(s, *reference(), g);
  REQUIRE(yf.y.size() > 100);
  for (std::size_t i = 1; i < yf.y.size(); ++i) CHECK(yf.y[i] > yf.y[i - 1]);
  for (double j : yf.jacobian) CHECK(j > 0.0);
  CHECK(yf.y.front() < 1e-6);
  CHECK(yf.y.back() > 1 - 1e-6);

  // With a = 1: int u~_x (u - u~) dx = -delta int_0^1 f dy.
  const ShiftedProfile sh = shifted_eval(*reference(), g.x, s.X);
  std::vector<double> integrand(g.n_nodes());
  for (std::size_t i = 0; i < g.n_nodes(); ++i) integrand[i] = sh.u_x[i] * (s.u[i] - sh.u[i]);
  const double y1_flat = g.integrate(integrand);
  double fint = 0.0;
  for (std::size_t i = 1; i < yf.y.size(); ++i) fint += 0.5 * (yf.y[i] - yf.y[i - 1]) * (yf.f[i] + yf.f[i - 1]);
  CHECK(fint == doctest::Approx(-y1_flat / kEnds.delta).epsilon(1e-5));

  const YFrame z = y_frame(bumped(g, 0.5, 0.002, 0.0), *reference(), g);
  for (double f : z.f) CHECK(f == 0.0);
}

TEST_CASE("energy identity: input validation") {
  std::vector<DiagnosticsRecord> h(2);
  CHECK_THROWS_AS(energy_identity_residual(h), UsageError);
  h.resize(4);
  for (std::size_t k = 0; k < 4; ++k) h[k].t = double(k);
  h[3].t = 3.5;
  CHECK_THROWS_AS(energy_identity_residual(h), UsageError);
}

TEST_CASE("energy identity: zero perturbation") {
  SimConfig c = short_config(1024, 2.0);
  c.perturbation = PerturbationSpec{};
  const RunResult r = run(c);
  for (const auto& rec : r.records) CHECK(rec.identity_residual <= 1e-15);
}

TEST_CASE("energy identity: residual converges under refinement") {
  std::vector<double> res;
  for (int level = 0; level < 3; ++level) {
    SimConfig c = short_config(1024, 2.0);
    c.refine = level;
    const RunResult r = run(c);
    std::vector<double> v;
    for (const auto& rec : r.records) v.push_back(rec.identity_residual);
    res.push_back(max_of(v));
  }
  CHECK(res[0] / res[1] >= 2.0);
  CHECK(res[1] / res[2] >= 2.0);
}

TEST_CASE("energy identity: invariant under a common velocity offset") {
  SimConfig a = short_config(1024, 1.0);
  SimConfig b = a;
  b.u_plus = 0.75;
  const RunResult ra = run(a), rb = run(b);
  REQUIRE(ra.records.size() == rb.records.size());
  for (std::size_t k = 1; k + 1 < ra.records.size(); ++k) {
    CHECK(rb.records[k].identity_residual ==
          doctest::Approx(ra.records[k].identity_residual).epsilon(1e-6).scale(1e-12));
  }
}

TEST_CASE("a-priori ratio and contraction slack") {
  CHECK_THROWS_AS(apriori_ratio(std::vector<DiagnosticsRecord>{}, 0.1), UsageError);
  std::vector<DiagnosticsRecord> zero(5);
  for (std::size_t k = 0; k < 5; ++k) zero[k].t = double(k);
  for (double v : apriori_ratio(zero, 0.1)) CHECK(v == 1.0);
  CHECK(contraction_slack(zero) == 0.0);

  std::vector<DiagnosticsRecord> h(4);
  const double e[] = {1.0, 0.8, 0.9, 0.5};
  const double h1[] = {2.0, 1.0, 3.0, 1.0};
  for (std::size_t k = 0; k < 4; ++k) {
    h[k].t = double(k);
    h[k].weighted_rel_entropy = e[k];
    h[k].h1_perturbation = h1[k];
    h[k].Dv = 1.0;
    h[k].X_dot = 2.0;
  }
  CHECK(contraction_slack(h) == doctest::Approx(0.1));
  const std::vector<double> ratio = apriori_ratio(h, 0.5);
  // t = 2: [3 + 0.5 * 4 * 2 + 0 + 2] / 2
  CHECK(ratio[0] == doctest::Approx(1.0));
  CHECK(ratio[2] == doctest::Approx(4.5));
  for (std::size_t k = 1; k < ratio.size(); ++k) CHECK(ratio[k] >= ratio[k - 1]);
}

TEST_CASE("diffusion coefficient probe") {
  std::vector<double> ratios;
  for (double d : {0.2, 0.1, 0.05}) {
    const EndStates e = left_state_from_right(kGas, 1.0, 0.0, delta_v_for_strength(kGas, 1.0, d));
    ProfileOptions o;
    o.n_samples = 8193;
    const ShockProfile p = solve_profile(kGas, e, o);
    const DiffusionProbe r = diffusion_coefficient_probe(p);
    CHECK(r.samples > 100);
    CHECK(r.delta == doctest::Approx(d).epsilon(1e-10));
    // Closed form of the limit for the gamma law: sigma delta (gamma + 1) / (2 sigma_ell v-).
    CHECK(r.limit_value == doctest::Approx(e.sigma * d * (kGas.gamma + 1) /
                                           (2 * p.constants.sigma_ell * e.v_minus)).epsilon(1e-12));
    ratios.push_back(r.ratio);
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(hi / lo < 2.0);
  CHECK_THROWS_AS(diffusion_coefficient_probe(*reference(), 0.6), UsageError);
}

TEST_CASE("diagnostics csv") {
  CHECK(diagnostics_csv_header() ==
        "t,X,X_dot,aRE,G1,GS,Dv,Du1,Du2,Y1,Y2,Y3,Y4,B1,B2,B3,B4,B5,B6,cG1,cG2,cD,id_residual,"
        "sup_v,sup_u,h1,g,apriori_ratio");
  DiagnosticsRecord r;
  r.t = 0.1;
  r.apriori_ratio = 1.0 / 3.0;
  const std::string row = diagnostics_csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 27);
  CHECK(row.rfind("0.10000000000000001,", 0) == 0);
  CHECK(row.find("0.33333333333333331") != std::string::npos);
}
