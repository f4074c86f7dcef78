#include <doctest.h>

#include <cmath>

#include "coassoc/levelsets.hpp"
#include "coassoc/quadrature.hpp"
#include "coassoc/rng.hpp"
#include "oracles.hpp"

using namespace coassoc;

TEST_CASE("quadrature agrees with a composite-Simpson oracle") {
  Rng rng(51);
  const double lam = 0.8;
  for (int i = 0; i < 10; ++i) {
    const double b = rng.uniform(0.1, 4.0);
    auto f = [lam](double x) { return (x * x + 2 * lam) / std::pow(lam + x * x, 0.75); };
    const double gk = integrate_gk(f, 0.0, b, 1e-13);
    const double simp = oracle::simpson(f, 0.0, b, 4000);
    CHECK(gk == doctest::Approx(simp).epsilon(1e-10));
  }
  // orientation
  auto g = [](double x) { return std::cos(x); };
  CHECK(integrate_gk(g, 1.0, 0.0) == doctest::Approx(-std::sin(1.0)));
}

TEST_CASE("G: domain, oddness, closed partial derivatives") {
  const double lam = 1.0;
  CHECK_THROWS_AS(G_eval(0.5, 0.0, lam), DomainError);
  CHECK_THROWS_AS(G_eval(0.5, 1.2, lam), DomainError);
  for (double x1 : {0.2, 0.7, 1.0}) CHECK(G_eval(0.0, x1, lam) == doctest::Approx(0.0));
  Rng rng(52);
  for (int i = 0; i < 10; ++i) {
    const double a1 = rng.uniform(-2.0, 2.0);
    const double x1 = rng.uniform(0.05, 0.95);
    CHECK(G_eval(-a1, x1, lam) == doctest::Approx(-G_eval(a1, x1, lam)).epsilon(1e-12));
    const double h = 1e-6;
    const double dx = (G_eval(a1, x1 + h, lam) - G_eval(a1, x1 - h, lam)) / (2 * h);
    CHECK(dx == doctest::Approx(4 * a1 * std::pow(lam + a1 * a1, 0.25) * x1).epsilon(1e-7));
    const double da = (G_eval(a1 + h, x1, lam) - G_eval(a1 - h, x1, lam)) / (2 * h);
    const double expect = 0.5 * std::pow(lam + a1 * a1, -0.75) *
                          ((2 * x1 * x1 - 1) * (3 * a1 * a1 + 2 * lam) + a1 * a1 + 2 * lam);
    CHECK(da == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("F: domain, base values, closed partial derivative") {
  const double lam = 1.0;
  CHECK_THROWS_AS(F_eval(-0.1, 0.0, lam), DomainError);
  for (double x5 : {-1.0, 0.3, 1.0}) CHECK(F_eval(0.0, x5, lam) == doctest::Approx(0.0));
  // at x5 = 1/3 only the integral term survives
  const double r = 1.3;
  const double I = integrate_gk(
      [lam](double x) { return 2 * lam / std::pow(lam + x * x * x * x, 0.875); }, 0.0,
      std::sqrt(r), 1e-13);
  CHECK(F_eval(r, 1.0 / 3.0, lam) == doctest::Approx(I).epsilon(1e-12));
  Rng rng(53);
  for (int i = 0; i < 10; ++i) {
    const double rr = rng.uniform(0.05, 3.0);
    const double x5 = rng.uniform(-1.0, 1.0);
    const double h = 1e-6;
    const double d5 = (F_eval(rr, x5 + h, lam) - F_eval(rr, x5 - h, lam)) / (2 * h);
    CHECK(d5 ==
          doctest::Approx(-3 * std::pow(lam + rr * rr, 0.125) * std::sqrt(rr)).epsilon(1e-7));
  }
}

TEST_CASE("monotonicity on grids") {
  const double lam = 1.0;
  // F(r, .) strictly decreasing on [-1, 1] for fixed r > 0
  for (double r : {0.2, 1.0, 2.5}) {
    double prev = F_eval(r, -1.0, lam);
    for (int i = 1; i <= 50; ++i) {
      const double x5 = -1.0 + 2.0 * i / 50.0;
      const double v = F_eval(r, x5, lam);
      CHECK(v < prev);
      prev = v;
    }
  }
  // G(a1, .) strictly increasing on (0, 1] for fixed a1 > 0
  for (double a1 : {0.3, 1.0, 2.0}) {
    double prev = G_eval(a1, 0.01, lam);
    for (int i = 1; i <= 50; ++i) {
      const double x1 = 0.01 + (1.0 - 0.01) * i / 50.0;
      const double v = G_eval(a1, x1, lam);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("roots satisfy their defining equations to 1e-11") {
  const double lam = 1.0;
  for (double C : {0.25, 1.0, 3.0}) {
    const double a = roots_alpha(SymCase::SU2, C, lam);
    CHECK(std::abs(F_eval(a, -1.0, lam) - C) < 1e-11);
    const double b = roots_beta(SymCase::SU2, -C, lam);
    CHECK(std::abs(F_eval(b, 1.0, lam) + C) < 1e-11);
    const double ag = roots_alpha(SymCase::SO3xSO2, C, lam);
    CHECK(std::abs(G_eval(ag, 1.0, lam) - C) < 1e-11);
    const double bg = roots_beta(SymCase::SO3xSO2, C, lam);
    // the limit x1 -> 0 value of G
    const double g0 = -bg * std::pow(lam + bg * bg, 0.25) +
                      0.5 * integrate_gk(
                                [lam](double x) {
                                  return (x * x + 2 * lam) / std::pow(lam + x * x, 0.75);
                                },
                                0.0, bg, 1e-13);
    CHECK(std::abs(g0 - C) < 1e-11);
    CHECK(bg < 0.0);  // beta has the opposite sign of C
  }
  CHECK_THROWS_AS(roots_alpha(SymCase::SU2, -1.0, 1.0), NoRootError);
  CHECK_THROWS_AS(roots_beta(SymCase::SU2, 1.0, 1.0), NoRootError);
}

TEST_CASE("analysis-function bounds on dense grids") {
  const double lam = 1.0;
  const int N = 10000;

  SUBCASE("f_C for C > 0") {
    const double C = 1.0;
    const double alpha = roots_alpha(SymCase::SU2, C, lam);
    for (int i = 1; i <= N; ++i) {
      const double r = 6.0 * i / N;
      const double v = f_C(r, C, lam);
      CHECK(v > -2.0);
      if (r < alpha * (1 - 1e-9))
        CHECK(v > 4.0);
      else if (r > alpha * (1 + 1e-9))
        CHECK(v < 4.0);
    }
  }

  SUBCASE("f_C for C < 0 and C = 0") {
    const double C = -1.0;
    const double beta = roots_beta(SymCase::SU2, C, lam);
    for (int i = 1; i <= N; ++i) {
      const double r = 6.0 * i / N;
      const double v = f_C(r, C, lam);
      CHECK(v < 4.0);
      if (r < beta * (1 - 1e-9))
        CHECK(v < -2.0);
      else if (r > beta * (1 + 1e-9))
        CHECK(v > -2.0);
      const double v0 = f_C(r, 0.0, lam);
      CHECK(v0 > -2.0);
      CHECK(v0 < 4.0);
    }
  }

  SUBCASE("g_C for C > 0") {
    const double C = 1.0;
    const double alpha = roots_alpha(SymCase::SO3xSO2, C, lam);
    const double beta = roots_beta(SymCase::SO3xSO2, C, lam);
    for (int i = 1; i <= N; ++i) {
      const double a1 = 6.0 * i / N;
      const double vp = g_C(a1, C, lam);
      CHECK(vp > -1.0);
      if (a1 < alpha * (1 - 1e-9))
        CHECK(vp > 1.0);
      else if (a1 > alpha * (1 + 1e-9))
        CHECK(vp <= 1.0 + 1e-12);
      const double vm = g_C(-a1, C, lam);
      CHECK(vm < 1.0);
      if (-a1 < beta * (1 + 1e-9))
        CHECK(vm > -1.0);
      else if (-a1 > beta * (1 - 1e-9))
        CHECK(vm < -1.0);
    }
  }

  SUBCASE("g_0 stays strictly between the walls") {
    for (int i = 1; i <= N; ++i) {
      const double a1 = 6.0 * i / N;
      CHECK(std::abs(g_C(a1, 0.0, lam)) < 1.0);
      CHECK(std::abs(g_C(-a1, 0.0, lam)) < 1.0);
    }
  }
}

TEST_CASE("traced curves satisfy their defining equations") {
  const double lam = 1.0;
  for (double C : {-1.0, 0.0, 1.0}) {
    for (const auto& lc : trace_level(SymCase::SO3xSO2, {C}, lam, 64))
      CHECK(lc.max_defining_residual(lam) < 1e-9);
    for (const auto& lc : trace_level(SymCase::SU2, {C}, lam, 64))
      CHECK(lc.max_defining_residual(lam) < 1e-9);
  }
  for (const auto& lc : trace_level(SymCase::SO3Std, {0.3, 0.2, 0.1}, lam, 64))
    CHECK(lc.max_defining_residual(lam) < 1e-9);
}

TEST_CASE("component structure of the three families") {
  const double lam = 1.0;

  SUBCASE("so3xso2: three pieces at C = 0, two otherwise") {
    const auto r0 = component_report(SymCase::SO3xSO2, {0.0}, lam);
    CHECK(r0.count == 3);
    bool has_zero_section = false;
    for (const auto& l : r0.labels) has_zero_section |= l == "zero-section";
    CHECK(has_zero_section);
    CHECK(component_report(SymCase::SO3xSO2, {1.0}, lam).count == 2);
    CHECK(component_report(SymCase::SO3xSO2, {-1.0}, lam).count == 2);
  }

  SUBCASE("su2: counts 1 / 2 / 1 and endpoint behaviour") {
    CHECK(component_report(SymCase::SU2, {1.0}, lam).count == 1);
    CHECK(component_report(SymCase::SU2, {0.0}, lam).count == 2);
    CHECK(component_report(SymCase::SU2, {-1.0}, lam).count == 1);

    const auto curves = trace_level(SymCase::SU2, {1.0}, lam, 64);
    REQUIRE(curves.size() == 1);
    const auto& q0 = curves[0].samples.front();
    CHECK(q0(0) == doctest::Approx(-1.0));  // starts at x5 = -1
    CHECK(q0(1) == doctest::Approx(roots_alpha(SymCase::SU2, 1.0, lam)).epsilon(1e-9));
    for (const auto& q : curves[0].samples) CHECK(q(0) < 1.0);  // never meets x5 = 1

    const auto curves_neg = trace_level(SymCase::SU2, {-1.0}, lam, 64);
    for (const auto& q : curves_neg[0].samples) CHECK(q(0) > -1.0);
  }

  SUBCASE("so3std: the ten table rows") {
    const double l = lam;
    struct Row {
      double C, D, E;
      int count;
      std::string topo;
    };
    const double quarter = 0.25 * l;  // sqrt(C)+sqrt(D) = sqrt(l) when C = D = l/4
    const Row rows[] = {
        {0.3 * l, 0.3 * l, 0.0, 4, "TS^2"},
        {quarter, quarter, 0.0, 4, "N"},
        {0.3 * l, 0.3 * l, 0.7, 4, "TS^2"},
        {0.0, 0.0, 0.0, 1, "TS^2"},
        {0.5 * l, 0.0, 0.0, 2, "TS^2"},
        {l, 0.0, 0.0, 2, "N"},
        {0.5 * l, 0.0, 0.7, 2, "TS^2"},
        {0.0, 0.5 * l, 0.0, 2, "TS^2"},
        {0.0, l, 0.0, 2, "N"},
        {0.0, 0.5 * l, 0.7, 2, "TS^2"},
    };
    for (const auto& row : rows) {
      const auto rep = component_report(SymCase::SO3Std, {row.C, row.D, row.E}, lam);
      CAPTURE(row.C);
      CAPTURE(row.D);
      CAPTURE(row.E);
      CHECK(rep.count == row.count);
      for (const auto& t : rep.topology) CHECK(t == row.topo);
    }
  }

  SUBCASE("the singular row passes through the cone point") {
    const auto curves = trace_level(SymCase::SO3Std, {0.25, 0.25, 0.0}, lam, 64);
    for (const auto& lc : curves) {
      CHECK(lc.endpoints[0] == "conical point (r = 0, x1 = 0)");
      const auto& q0 = lc.samples.front();
      CHECK(std::abs(q0(0)) < 1e-9);                      // x1 = 0
      CHECK(std::hypot(q0(3), q0(4)) < 1e-9);             // a = 0
    }
  }
}

TEST_CASE("empty level sets throw the no-root contract") {
  CHECK_THROWS_AS(trace_level(SymCase::SO3Std, {-1.0, 0.0, 0.0}, 1.0, 32), NoRootError);
}

TEST_CASE("asymptotic curves") {
  // C = 0 limits: the vertical lines of the two figures
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.5 + i * 0.2);
  const LevelCurve su2_0 = asymptotic_curve(SymCase::SU2, 0.0, grid);
  for (const auto& q : su2_0.samples) CHECK(q(0) == doctest::Approx(1.0 / 3.0));
  const LevelCurve so3_0 = asymptotic_curve(SymCase::SO3xSO2, 0.0, grid);
  for (const auto& q : so3_0.samples)
    CHECK(q(0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  // samples satisfy the cone-limit equation (1 - 3 x5) r^{3/4} = C
  const LevelCurve su2_2 = asymptotic_curve(SymCase::SU2, 2.0, grid);
  for (const auto& q : su2_2.samples)
    CHECK((1.0 - 3.0 * q(0)) * std::pow(q(1), 0.75) == doctest::Approx(2.0).epsilon(1e-12));

  // lambda sweep: sup distance decreases monotonically to the cone limit
  const double C = 1.0;
  std::vector<double> win;
  for (int i = 0; i < 40; ++i) win.push_back(0.5 + i * (2.5 / 39.0));
  double prev = 1e9;
  for (double lam : {1.0, 0.1, 0.01, 0.001}) {
    double sup = 0.0;
    for (double r : win) {
      const double x5_lam = (1.0 - f_C(r, C, lam)) / 3.0;
      const double x5_0 = (1.0 - C * std::pow(r, -0.75)) / 3.0;
      sup = std::max(sup, std::abs(x5_lam - x5_0));
    }
    CHECK(sup < prev);
    prev = sup;
  }
  std::vector<double> wina;
  for (int i = 0; i < 40; ++i) wina.push_back(1.0 + i * (3.0 / 39.0));
  prev = 1e9;
  for (double lam : {1.0, 0.1, 0.01, 0.001}) {
    double sup = 0.0;
    for (double a1 : wina) {
      const double x1_lam = std::sqrt((g_C(a1, C, lam) + 1.0) / 2.0);
      const double x1_0 = std::sqrt(C / (2.0 * std::pow(a1, 1.5)) + 1.0 / 3.0);
      sup = std::max(sup, std::abs(x1_lam - x1_0));
    }
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("conical rate") {
  std::vector<double> rs;
  for (int i = 0; i < 30; ++i) rs.push_back(1e-3 * std::pow(100.0, i / 29.0));
  const RateReport rep = singular_rate_check(1.0, rs);
  CHECK(rep.slope == doctest::Approx(3.0).epsilon(0.05 / 3.0));
  // f(r)/r -> lambda^{1/4}
  CHECK(std::abs(cone_profile(1.0, 1e-4) / 1e-4 - 1.0) < 1e-7);
  const RateReport rep16 = singular_rate_check(16.0, rs);
  CHECK(rep16.limit_ratio == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("traced families certify as coassociative through sweeps") {
  const double lam = 1.0;
  const G2Params params{lam, false};
  // one representative curve per family, decimated
  auto decimate = [](const LevelCurve& lc, size_t keep) {
    std::vector<PathState> out;
    const auto all = lc.states();
    const size_t stride = std::max<size_t>(1, all.size() / keep);
    for (size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    return out;
  };
  {
    const auto curves = trace_level(SymCase::SO3xSO2, {1.0}, lam, 64);
    const SweepReport rep =
        sweep_and_verify(SymCase::SO3xSO2, decimate(curves[0], 8), params, 4, 77);
    CHECK(rep.max_residual < 1e-7);
  }
  {
    const auto curves = trace_level(SymCase::SU2, {-1.0}, lam, 64);
    const SweepReport rep =
        sweep_and_verify(SymCase::SU2, decimate(curves[0], 8), params, 4, 78);
    CHECK(rep.max_residual < 1e-7);
  }
  {
    const auto curves = trace_level(SymCase::SO3Std, {0.3, 0.2, 0.1}, lam, 64);
    const SweepReport rep =
        sweep_and_verify(SymCase::SO3Std, decimate(curves[0], 8), params, 4, 79);
    CHECK(rep.max_residual < 1e-7);
  }
}
