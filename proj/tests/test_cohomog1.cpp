#include <doctest.h>

#include <cmath>

#include "coassoc/levelsets.hpp"
#include "coassoc/rng.hpp"

using namespace coassoc;

namespace {

const double S3 = std::sqrt(3.0);

PathState so3xso2_state(double x1, double a1) {
  PathState s;
  s.cse = SymCase::SO3xSO2;
  s.q = (Eigen::VectorXd(2) << x1, a1).finished();
  return s;
}

PathState su2_state(double x5, double r, const Vec3& dir = Vec3(1, 0, 0)) {
  PathState s;
  s.cse = SymCase::SU2;
  s.q = (Eigen::VectorXd(2) << x5, r).finished();
  s.dir = dir.normalized();
  return s;
}

PathState so3std_state(double x1, double x4, double a1, double a2) {
  PathState s;
  s.cse = SymCase::SO3Std;
  const double x5 = std::sqrt(std::max(0.0, 1.0 - x1 * x1 - x4 * x4));
  s.q = (Eigen::VectorXd(5) << x1, x4, x5, a1, a2).finished();
  return s;
}

PathState irr_state(double x5, const Vec3& a) {
  PathState s;
  s.cse = SymCase::SO3Irr;
  s.q = (Eigen::VectorXd(5) << std::sqrt(1.0 - x5 * x5), x5, a(0), a(1), a(2)).finished();
  return s;
}

// directional derivative of the conserved values along the returned direction
double conserved_drift_rate(const PathState& s, const G2Params& params) {
  const Eigen::VectorXd v = ode_rhs(s, params);
  const double h = 1e-6;
  PathState sp = s, sm = s;
  sp.q += h * v;
  sm.q -= h * v;
  const ConservedValues cp = conserved(sp, params);
  const ConservedValues cm = conserved(sm, params);
  double worst = 0.0;
  for (size_t i = 0; i < cp.values.size(); ++i)
    worst = std::max(worst, std::abs(cp.values[i] - cm.values[i]) / (2.0 * h));
  return worst;
}

}  // namespace

TEST_CASE("kernel property and conserved-quantity derivatives") {
  const G2Params params{1.0, false};
  const PathState states[] = {so3xso2_state(0.7, 0.5), su2_state(0.2, 0.8),
                              so3std_state(0.5, 0.5, 0.4, 0.7),
                              irr_state(0.1, Vec3(0.5, 0.6, 0.4))};
  for (const auto& s : states) {
    const Eigen::VectorXd v = ode_rhs(s, params);
    CHECK(v.norm() == doctest::Approx(1.0));
    const Eigen::MatrixXd A = velocity_relations(s, params);
    CHECK((A * v).cwiseAbs().maxCoeff() < 1e-10);
    if (s.cse != SymCase::SO3Irr) CHECK(conserved_drift_rate(s, params) < 1e-8);
  }
}

TEST_CASE("so3xso2 direction matches the implicit level-curve tangent") {
  const G2Params params{0.8, false};
  const PathState s = so3xso2_state(0.62, -0.9);
  const Eigen::VectorXd v = ode_rhs(s, params);
  // FD gradient of G in (x1, a1) coordinates
  const double h = 1e-6;
  const double gx =
      (G_eval(s.q(1), s.q(0) + h, params.lambda) - G_eval(s.q(1), s.q(0) - h, params.lambda)) /
      (2 * h);
  const double ga =
      (G_eval(s.q(1) + h, s.q(0), params.lambda) - G_eval(s.q(1) - h, s.q(0), params.lambda)) /
      (2 * h);
  CHECK(std::abs(gx * v(0) + ga * v(1)) < 1e-8);
}

TEST_CASE("su2 direction annihilates F") {
  const G2Params params{1.0, false};
  const PathState s = su2_state(-0.4, 1.3);
  const Eigen::VectorXd v = ode_rhs(s, params);
  const double h = 1e-6;
  const double f5 =
      (F_eval(s.q(1), s.q(0) + h, params.lambda) - F_eval(s.q(1), s.q(0) - h, params.lambda)) /
      (2 * h);
  const double fr =
      (F_eval(s.q(1) + h, s.q(0), params.lambda) - F_eval(s.q(1) - h, s.q(0), params.lambda)) /
      (2 * h);
  CHECK(std::abs(f5 * v(0) + fr * v(1)) < 1e-10);
}

TEST_CASE("reduction identity: eq2 + x4 eq3 equals the x5 first integral") {
  Rng rng(41);
  const double lam = 1.2;
  for (int i = 0; i < 30; ++i) {
    Vec3 xs(rng.normal(), rng.normal(), rng.normal());
    xs.normalize();
    const double x1 = std::abs(xs(0)), x4 = xs(1), x5 = 0.9 * xs(2);
    // re-normalize to the sphere with the damped x5
    const double nn = std::sqrt(x1 * x1 + x4 * x4 + x5 * x5);
    const double X1 = x1 / nn, X4 = x4 / nn, X5 = x5 / nn;
    const double a1 = rng.normal(), a2 = rng.normal();
    // sphere-compatible random velocities
    double xd1 = rng.normal(), xd4 = rng.normal();
    const double xd5 = -(X1 * xd1 + X4 * xd4) / X5;
    const double ad1 = rng.normal(), ad2 = rng.normal();
    const double L = lam + a1 * a1 + a2 * a2;
    const double dlog = 2.0 * (a1 * ad1 + a2 * ad2) / L;
    const double eq2 = 4 * X1 * xd1 - dlog + (X1 * X1 / (1 - X5)) * (4 * xd5 + dlog);
    const double eq3 = 4 * xd4 + (X4 / (1 - X5)) * (4 * xd5 + dlog);
    const double eq4 = 4 * xd5 + X5 * dlog;
    CHECK(std::abs(eq2 + X4 * eq3 - eq4) < 1e-12);
  }
}

TEST_CASE("residual vector vanishes along the reduced flow") {
  const G2Params params{1.0, false};
  const PathState states[] = {so3xso2_state(0.7, 0.5), su2_state(0.2, 0.8),
                              so3std_state(0.5, 0.5, 0.4, 0.7),
                              irr_state(0.1, Vec3(0.5, 0.6, 0.4))};
  for (const auto& s : states) {
    const Eigen::VectorXd v = ode_rhs(s, params);
    const Tangent cdot = state_tangent(s, v);
    for (double r : residual_vector(s, params, cdot)) CHECK(std::abs(r) < 1e-9);
  }
}

TEST_CASE("su2 case: phi(E1*,E2*,E3*) vanishes identically") {
  Rng rng(42);
  const G2Params params{1.0, false};
  for (int i = 0; i < 10; ++i) {
    const PathState s = su2_state(rng.uniform(-0.8, 0.8), rng.uniform(0.1, 2.0),
                                  rng.normal3());
    Eigen::VectorXd zero(2);
    zero.setZero();
    const Tangent cdot = state_tangent(s, Eigen::VectorXd(zero));
    const auto res = residual_vector(s, params, cdot);
    // last entry is phi(E1,E2,E3)
    CHECK(std::abs(res.back()) < 1e-9);
  }
}

TEST_CASE("so3xso2 slice residual formula from the reduction") {
  const double lam = 1.0;
  const G2Params params{lam, false};
  const double x1 = 0.6, a1 = 0.8;
  const double x4 = std::sqrt(1 - x1 * x1);
  const PathState s = so3xso2_state(x1, a1);
  // velocity (xd1, ad1) = (0.3, -0.5); x4 xd4 = -x1 xd1
  Eigen::VectorXd qdot(2);
  qdot << 0.3, -0.5;
  const Tangent cdot = state_tangent(s, qdot);
  const auto res = residual_vector(s, params, cdot);
  // phi(E1*, E2*, cdot) is the first entry (pair (0,1))
  const double xd4 = -x1 * qdot(0) / x4;
  const double slam = std::pow(lam + a1 * a1, 0.25);
  const double expect = 2 * slam * (-2 * a1 * x4 * xd4 + qdot(1) * x1 * x1) -
                        std::pow(slam, -3.0) * qdot(1) * a1 * a1 * x4 * x4;
  CHECK(res[0] == doctest::Approx(expect).epsilon(1e-9));
  // stationary direction on the invariant locus gives an all-zero vector
  Eigen::VectorXd zero(2);
  zero.setZero();
  for (double r : residual_vector(s, params, state_tangent(s, Eigen::VectorXd(zero))))
    CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("malformed and off-slice inputs are rejected") {
  PathState s;
  s.cse = SymCase::SO3Irr;
  s.q = (Eigen::VectorXd(5) << 0.9, 0.1, 0, 0, 0).finished();  // x1^2 + x5^2 != 1
  CHECK_THROWS_AS(residual_vector(s, G2Params{1.0, false}, Tangent{}), Error);
  // a genuinely off-slice bundle point for the closed-form fields
  Vec5 x;
  x << 0.6, 0.5, 0, 0, 0;
  x.normalize();
  const TotalPoint p{ChartId::Frame, make_base_point(x), Vec3(0.3, 0, 0)};
  CHECK_THROWS_AS(fundamental_field_closed(SymCase::SU2, 0, p), SliceError);
}

TEST_CASE("singular locus raises at a degenerate kernel") {
  // irreducible case with a = 0 and x1^2 ~ 3 x5^2 makes row 3 vanish entirely
  const double x5 = 0.5 - 1e-13;
  PathState s = irr_state(x5, Vec3::Zero());
  CHECK_THROWS_AS(ode_rhs(s, G2Params{1.0, false}), SingularLocusError);
}

TEST_CASE("zero-length integration returns the initial state") {
  const Trajectory tr = integrate(so3xso2_state(0.7, 0.5), G2Params{1.0, false}, 0.0, 1e-10);
  REQUIRE(tr.q.size() == 1);
  CHECK(tr.stop == StopReason::TMax);
}

TEST_CASE("conserved quantities drift below 1e-8 over length-10 trajectories") {
  const G2Params params{1.0, false};
  const PathState starts[] = {so3xso2_state(0.75, 0.4), su2_state(-0.2, 0.7),
                              so3std_state(0.55, 0.5, 0.4, 0.7)};
  for (const auto& s0 : starts) {
    const Trajectory tr = integrate(s0, params, 10.0, 1e-12);
    const ConservedValues c0 = conserved(PathState{s0.cse, tr.q.front(), s0.dir}, params);
    double drift = 0.0;
    for (const auto& q : tr.q) {
      const ConservedValues ci = conserved(PathState{s0.cse, q, s0.dir}, params);
      for (size_t i = 0; i < ci.values.size(); ++i)
        drift = std::max(drift, std::abs(ci.values[i] - c0.values[i]));
    }
    CAPTURE(case_name(s0.cse));
    CHECK(drift < 1e-8);
  }
}

TEST_CASE("so3std sphere constraint is maintained") {
  const Trajectory tr =
      integrate(so3std_state(0.55, 0.5, 0.4, 0.7), G2Params{1.0, false}, 5.0, 1e-11);
  for (const auto& q : tr.q)
    CHECK(std::abs(q.head<3>().norm() - 1.0) < 1e-10);
}

TEST_CASE("su2 trajectory reaches the x5 = -1 boundary going down the curve") {
  const G2Params params{1.0, false};
  const double C = 1.0;
  // place the state on the curve F = C at x5 = -0.6
  double a = roots_alpha(SymCase::SU2, C, params.lambda), b = 8.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    (F_eval(mid, -0.6, params.lambda) < C ? a : b) = mid;
  }
  const PathState s = su2_state(-0.6, 0.5 * (a + b), Vec3(0, 0, 1));
  // drive toward shrinking r: the curve must terminate at (alpha_C, -1)
  Eigen::VectorXd down(2);
  down << -1.0, -1.0;
  const Trajectory tr = integrate(s, params, 10.0, 1e-11, &down);
  CHECK(tr.stop == StopReason::DomainBoundary);
  CHECK(tr.stop_detail == "x5 = -1");
  const Eigen::VectorXd last = tr.q.back();
  CHECK(last(1) ==
        doctest::Approx(roots_alpha(SymCase::SU2, C, params.lambda)).epsilon(1e-5));
  double drift = 0.0;
  for (const auto& q : tr.q)
    drift = std::max(drift, std::abs(F_eval(q(1), q(0), params.lambda) - C));
  CHECK(drift < 1e-8);
}

TEST_CASE("irreducible trajectories stop at the Veronese stratum") {
  const G2Params params{1.0, false};
  const PathState s = irr_state(0.42, Vec3(0.2, 0.9, 0.1));
  const Trajectory tr = integrate(s, params, 50.0, 1e-10);
  if (tr.stop == StopReason::DomainBoundary)
    CHECK(tr.stop_detail.find("Veronese") != std::string::npos);
  for (const auto& q : tr.q) {
    CHECK(std::abs(q(1)) <= 0.5 + 1e-9);
    CHECK(std::abs(q.head<2>().norm() - 1.0) < 1e-10);
    CHECK(q(0) >= S3 / 2 - 1e-9);  // x1 = sqrt(1 - x5^2) >= sqrt(3)/2 on the slice
  }
}

TEST_CASE("reduce_so3_system values") {
  const G2Params params{1.0, false};
  // a = 0, x4 = x5 = 0
  CHECK(reduce_so3_system(so3std_state(1.0, 0.0, 0.0, 0.0), params).values ==
        std::vector<double>{0.0, 0.0, 0.0});
  // the conical-singularity value: x4^4 (l + r^2) = l with r = 0, x4 = 1
  PathState s;
  s.cse = SymCase::SO3Std;
  s.q = (Eigen::VectorXd(5) << 0.0, 1.0, 0.0, 0.0, 0.0).finished();
  const auto c = reduce_so3_system(s, params);
  CHECK(c.values[0] == doctest::Approx(params.lambda));
  CHECK(c.values[1] == 0.0);
  CHECK(c.values[2] == 0.0);
  // duplicate-formula oracle at a random state
  Rng rng(43);
  const double x1 = 0.4, x4 = 0.6;
  const PathState r = so3std_state(x1, x4, rng.normal(), rng.normal());
  const auto cv = reduce_so3_system(r, params);
  const double L = params.lambda + r.q(3) * r.q(3) + r.q(4) * r.q(4);
  CHECK(cv.values[0] == doctest::Approx(std::pow(x4, 4) * L));
  CHECK(cv.values[1] == doctest::Approx(std::pow(r.q(2), 4) * L));
  CHECK(cv.values[2] == doctest::Approx(r.q(3) * x1));
}

TEST_CASE("sweeps certify the reduced families") {
  const G2Params params{1.0, false};

  SUBCASE("so3std trajectory") {
    const Trajectory tr =
        integrate(so3std_state(0.55, 0.5, 0.4, 0.7), params, 6.0, 1e-11);
    std::vector<PathState> samples;
    for (size_t i = 0; i < tr.q.size(); i += std::max<size_t>(1, tr.q.size() / 10))
      samples.push_back(PathState{SymCase::SO3Std, tr.q[i], Vec3(1, 0, 0)});
    const SweepReport rep = sweep_and_verify(SymCase::SO3Std, samples, params, 5, 99);
    CHECK(rep.max_residual < 1e-7);
    CHECK(rep.samples_checked > 0);
  }

  SUBCASE("irreducible trajectory certifies with no closed form") {
    const Trajectory tr = integrate(irr_state(0.1, Vec3(0.5, 0.6, 0.4)), params, 3.0, 1e-11);
    std::vector<PathState> samples;
    for (size_t i = 0; i < tr.q.size(); i += std::max<size_t>(1, tr.q.size() / 10))
      samples.push_back(PathState{SymCase::SO3Irr, tr.q[i], Vec3(1, 0, 0)});
    const SweepReport rep = sweep_and_verify(SymCase::SO3Irr, samples, params, 5, 98);
    CHECK(rep.max_residual < 1e-7);
  }

  SUBCASE("zero section slice has vanishing residual") {
    std::vector<PathState> samples;
    for (double x1 : {0.3, 0.5, 0.8}) samples.push_back(so3xso2_state(x1, 0.0));
    const SweepReport rep = sweep_and_verify(SymCase::SO3xSO2, samples, params, 5, 97);
    CHECK(rep.max_residual < 1e-9);
  }
}
