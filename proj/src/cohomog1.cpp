#include "coassoc/cohomog1.hpp"

#include <cmath>

#include "coassoc/levelsets.hpp"
#include "coassoc/rng.hpp"

namespace coassoc {

namespace {

const double kSqrt3 = std::sqrt(3.0);
constexpr double kSingularRel = 1e-8;
constexpr double kTraceEps = 1e-6;  // x1 > 0 cutoff shared with the tracer

double clamp01(double v) { return std::min(1.0, std::max(-1.0, v)); }

}  // namespace

int state_dim(SymCase c) {
  switch (c) {
    case SymCase::SO3xSO2: return 2;
    case SymCase::SU2: return 2;
    case SymCase::SO3Std: return 5;
    case SymCase::SO3Irr: return 5;
    default: throw DomainError("state_dim: case has no path reduction");
  }
}

std::vector<std::string> state_names(SymCase c) {
  switch (c) {
    case SymCase::SO3xSO2: return {"x1", "a1"};
    case SymCase::SU2: return {"x5", "r"};
    case SymCase::SO3Std: return {"x1", "x4", "x5", "a1", "a2"};
    case SymCase::SO3Irr: return {"x1", "x5", "a1", "a2", "a3"};
    default: throw DomainError("state_names: case has no path reduction");
  }
}

namespace {

// The slice data (base position and fiber coordinates) is stated in the FRAME
// trivialization; states too close to the poles have no usable chart here.
TotalPoint to_total_frame(const PathState& s) {
  Vec5 x = Vec5::Zero();
  Vec3 a = Vec3::Zero();
  switch (s.cse) {
    case SymCase::SO3xSO2: {
      const double x1 = clamp01(s.q(0));
      x(0) = x1;
      x(3) = std::sqrt(std::max(0.0, 1.0 - x1 * x1));
      a(0) = s.q(1);
      break;
    }
    case SymCase::SU2: {
      const double x5 = clamp01(s.q(0));
      x(0) = std::sqrt(std::max(0.0, 1.0 - x5 * x5));
      x(4) = x5;
      a = s.q(1) * s.dir;
      break;
    }
    case SymCase::SO3Std:
      x(0) = s.q(0);
      x(3) = s.q(1);
      x(4) = s.q(2);
      a(0) = s.q(3);
      a(1) = s.q(4);
      break;
    case SymCase::SO3Irr:
      x(0) = s.q(0);
      x(4) = s.q(1);
      a = s.q.tail<3>();
      break;
    default:
      throw DomainError("to_total: case has no path reduction");
  }
  if (!chart_admits(ChartId::Frame, x))
    throw ChartDomainError("to_total: slice state too close to the poles");
  return TotalPoint{ChartId::Frame, make_base_point(x), a};
}

}  // namespace

TotalPoint to_total(const PathState& s) {
  TotalPoint p = to_total_frame(s);
  if (std::abs(p.base.x(4)) > 0.95)
    p = chart_transition(p, p.base.x(4) > 0 ? ChartId::StereoPsi : ChartId::StereoPhi);
  return p;
}

Tangent state_tangent(const PathState& s, const Eigen::VectorXd& qdot) {
  const TotalPoint pf = to_total_frame(s);
  Vec5 xdot = Vec5::Zero();
  Vec3 adot_frame = Vec3::Zero();
  switch (s.cse) {
    case SymCase::SO3xSO2: {
      const double x1 = s.q(0);
      const double x4 = std::sqrt(std::max(1e-300, 1.0 - x1 * x1));
      xdot(0) = qdot(0);
      xdot(3) = -x1 * qdot(0) / x4;
      adot_frame(0) = qdot(1);
      break;
    }
    case SymCase::SU2: {
      const double x5 = s.q(0);
      const double x1 = std::sqrt(std::max(1e-300, 1.0 - x5 * x5));
      xdot(0) = -x5 * qdot(0) / x1;
      xdot(4) = qdot(0);
      adot_frame = qdot(1) * s.dir;
      break;
    }
    case SymCase::SO3Std:
      xdot(0) = qdot(0);
      xdot(3) = qdot(1);
      xdot(4) = qdot(2);
      adot_frame(0) = qdot(3);
      adot_frame(1) = qdot(4);
      break;
    case SymCase::SO3Irr:
      xdot(0) = qdot(0);
      xdot(4) = qdot(1);
      adot_frame = qdot.tail<3>();
      break;
    default:
      throw DomainError("state_tangent: case has no path reduction");
  }
  Tangent t;
  t.horiz = chart_coframe(ChartId::Frame, pf.base).frame.transpose() * xdot;
  t.vert = adot_frame;
  const TotalPoint p = to_total(s);
  if (p.chart != ChartId::Frame) t = tangent_transition(pf, t, p.chart);
  return t;
}

Eigen::MatrixXd velocity_relations(const PathState& s, const G2Params& params) {
  const double lam = params.lambda;
  switch (s.cse) {
    case SymCase::SO3xSO2: {
      const double x1 = s.q(0), a1 = s.q(1);
      Eigen::MatrixXd A(1, 2);
      A(0, 0) = 4.0 * a1 * x1;
      A(0, 1) = (-a1 * a1 + (2.0 * lam + 3.0 * a1 * a1) * x1 * x1) / (lam + a1 * a1);
      return A;
    }
    case SymCase::SU2: {
      const double x5 = s.q(0), r = s.q(1);
      Eigen::MatrixXd A(1, 2);
      A(0, 1) = 4.0 * (1.0 - x5) / (1.0 + x5) - 2.0 * r * r / (lam + r * r);
      A(0, 0) = -8.0 * r / (1.0 + x5);
      return A;
    }
    case SymCase::SO3Std: {
      const double x1 = s.q(0), x4 = s.q(1), x5 = s.q(2), a1 = s.q(3), a2 = s.q(4);
      const double L = lam + a1 * a1 + a2 * a2;
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 5);
      A(0, 0) = 8.0 * x1 * a1;
      A(0, 3) = 4.0 * x1 * x1 - (1.0 - x1 * x1) * a1 * 2.0 * a1 / L;
      A(0, 4) = -(1.0 - x1 * x1) * a1 * 2.0 * a2 / L;
      A(1, 0) = 4.0 * x1;
      A(1, 2) = 4.0 * x1 * x1 / (1.0 - x5);
      A(1, 3) = (-1.0 + x1 * x1 / (1.0 - x5)) * 2.0 * a1 / L;
      A(1, 4) = (-1.0 + x1 * x1 / (1.0 - x5)) * 2.0 * a2 / L;
      A(2, 1) = 4.0;
      A(2, 2) = 4.0 * x4 / (1.0 - x5);
      A(2, 3) = (x4 / (1.0 - x5)) * 2.0 * a1 / L;
      A(2, 4) = (x4 / (1.0 - x5)) * 2.0 * a2 / L;
      A(3, 0) = x1;
      A(3, 1) = x4;
      A(3, 2) = x5;
      return A;
    }
    case SymCase::SO3Irr: {
      const double x1 = s.q(0), x5 = s.q(1), a1 = s.q(2), a2 = s.q(3), a3 = s.q(4);
      const double L = lam + a1 * a1 + a2 * a2 + a3 * a3;
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 5);
      A(0, 1) = 4.0 * (2.0 * kSqrt3 * x1 + 4.0 * x5 + 1.0) * a1;
      A(0, 0) = 4.0 * kSqrt3 * (2.0 * x5 - 1.0) * a1;
      A(0, 2) = 8.0 * x1 * (-x1 + kSqrt3 * x5) -
                (kSqrt3 * x1 + x5 + 1.0) * (1.0 - 2.0 * x5) * a1 * 2.0 * a1 / L;
      A(0, 3) = -(kSqrt3 * x1 + x5 + 1.0) * (1.0 - 2.0 * x5) * a1 * 2.0 * a2 / L;
      A(0, 4) = -(kSqrt3 * x1 + x5 + 1.0) * (1.0 - 2.0 * x5) * a1 * 2.0 * a3 / L;
      A(1, 1) = 4.0 * (2.0 * kSqrt3 * x1 - 4.0 * x5 - 1.0) * a2;
      A(1, 0) = 4.0 * kSqrt3 * (2.0 * x5 - 1.0) * a2;
      A(1, 3) = 8.0 * x1 * (x1 + kSqrt3 * x5) +
                (-kSqrt3 * x1 + x5 + 1.0) * (1.0 - 2.0 * x5) * a2 * 2.0 * a2 / L;
      A(1, 2) = (-kSqrt3 * x1 + x5 + 1.0) * (1.0 - 2.0 * x5) * a2 * 2.0 * a1 / L;
      A(1, 4) = (-kSqrt3 * x1 + x5 + 1.0) * (1.0 - 2.0 * x5) * a2 * 2.0 * a3 / L;
      A(2, 1) = -4.0 * (x5 + 1.0) * a3;
      A(2, 0) = 12.0 * x1 * a3;
      A(2, 4) = 2.0 * (x1 * x1 - 3.0 * x5 * x5) +
                (1.0 + x5) * (1.0 - 2.0 * x5) * a3 * 2.0 * a3 / L;
      A(2, 2) = (1.0 + x5) * (1.0 - 2.0 * x5) * a3 * 2.0 * a1 / L;
      A(2, 3) = (1.0 + x5) * (1.0 - 2.0 * x5) * a3 * 2.0 * a2 / L;
      A(3, 0) = x1;
      A(3, 1) = x5;
      return A;
    }
    default:
      throw DomainError("velocity_relations: case has no path reduction");
  }
}

Eigen::VectorXd ode_rhs(const PathState& s, const G2Params& params, const Eigen::VectorXd* prev) {
  const Eigen::MatrixXd A = velocity_relations(s, params);
  Eigen::VectorXd v;
  if (A.rows() == 1) {
    if (A.row(0).norm() < 1e-14)
      throw SingularLocusError("ode_rhs: vanishing relation coefficients");
    v.resize(2);
    v << -A(0, 1), A(0, 0);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < kSingularRel * sv(0))
      throw SingularLocusError("ode_rhs: kernel dimension exceeds one");
    v = svd.matrixV().col(A.cols() - 1);
  }
  v.normalize();
  if (prev != nullptr && prev->size() == v.size()) {
    if (prev->dot(v) < 0.0) v = -v;
  } else {
    // default orientation: grow the fiber radius when it responds, otherwise
    // make the last coordinate increase
    double dr2 = 0.0;
    switch (s.cse) {
      case SymCase::SO3xSO2: dr2 = s.q(1) * v(1); break;
      case SymCase::SU2: dr2 = s.q(1) * v(1); break;
      case SymCase::SO3Std: dr2 = s.q(3) * v(3) + s.q(4) * v(4); break;
      case SymCase::SO3Irr: dr2 = s.q.tail<3>().dot(v.tail<3>()); break;
      default: break;
    }
    if (std::abs(dr2) > 1e-12) {
      if (dr2 < 0.0) v = -v;
    } else if (v(v.size() - 1) < 0.0) {
      v = -v;
    }
  }
  return v;
}

std::vector<double> residual_vector(const PathState& s, const G2Params& params,
                                    const Tangent& cdot) {
  const TotalPoint p = to_total(s);
  if (!on_slice(s.cse, p, 1e-9)) throw SliceError("residual_vector: state off slice");
  const CoframeData cf = chart_coframe(p.chart, p.base);
  const AltForm phi = phi_lambda(p, params);
  const int n = static_cast<int>(symmetry_case(s.cse).algebra.size());
  std::vector<Vec7> lifts;
  lifts.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i < n; ++i)
    lifts.push_back(lift_components(cf, p.fiber, fundamental_field(s.cse, i, p)));
  lifts.push_back(lift_components(cf, p.fiber, cdot));
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.push_back(phi.eval3(lifts[static_cast<size_t>(i)], lifts[static_cast<size_t>(j)],
                              lifts.back()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        out.push_back(phi.eval3(lifts[static_cast<size_t>(i)], lifts[static_cast<size_t>(j)],
                                lifts[static_cast<size_t>(k)]));
  return out;
}

std::string stop_name(StopReason r) {
  switch (r) {
    case StopReason::TMax: return "tmax";
    case StopReason::DomainBoundary: return "domain_boundary";
    case StopReason::SingularLocus: return "singular_locus";
  }
  return "?";
}

namespace {

void project_state(PathState& s) {
  switch (s.cse) {
    case SymCase::SO3xSO2:
      s.q(0) = clamp01(s.q(0));
      break;
    case SymCase::SU2:
      s.q(0) = clamp01(s.q(0));
      if (s.q(1) < 0.0) s.q(1) = 0.0;
      break;
    case SymCase::SO3Std: {
      const double n = s.q.head<3>().norm();
      if (n > 0.0) s.q.head<3>() /= n;
      break;
    }
    case SymCase::SO3Irr: {
      const double n = s.q.head<2>().norm();
      if (n > 0.0) s.q.head<2>() /= n;
      break;
    }
    default: break;
  }
}

// empty string = interior
std::string domain_violation(const PathState& s) {
  switch (s.cse) {
    case SymCase::SO3xSO2:
      if (s.q(0) >= 1.0 - 1e-12) return "x1 = 1";
      if (s.q(0) <= kTraceEps) return "x1 = 0 (excluded boundary)";
      return "";
    case SymCase::SU2:
      if (s.q(0) <= -1.0 + 1e-12) return "x5 = -1";
      if (s.q(0) >= 1.0 - 1e-12) return "x5 = 1";
      if (s.q(1) <= 1e-12) return "r = 0";
      return "";
    case SymCase::SO3Std:
      if (s.q(0) <= kTraceEps) return "x1 = 0";
      if (std::abs(s.q(2)) >= 1.0 - kChartDelta) return "x5 at chart margin";
      return "";
    case SymCase::SO3Irr:
      if (std::abs(s.q(1)) >= 0.5 - 1e-12) return "x5 = +-1/2 (Veronese stratum)";
      return "";
    default: return "";
  }
}

}  // namespace

Trajectory integrate(const PathState& s0, const G2Params& params, double tmax, double tol,
                     const Eigen::VectorXd* init_dir) {
  if (tol <= 0.0) throw DomainError("integrate: tolerance must be positive");
  // Dormand-Prince 5(4) tableau
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84, 0};
  static const double b4[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  Trajectory traj;
  PathState s = s0;
  project_state(s);
  double t = 0.0;
  traj.t.push_back(t);
  traj.q.push_back(s.q);
  if (tmax <= 0.0) return traj;

  Eigen::VectorXd prev;
  if (init_dir != nullptr) prev = *init_dir;
  double h = std::min(1e-3, tmax);
  const int n = state_dim(s.cse);

  std::string last_stage_failure;
  while (t < tmax) {
    if (auto why = domain_violation(s); !why.empty()) {
      traj.stop = StopReason::DomainBoundary;
      traj.stop_detail = why;
      return traj;
    }
    h = std::min(h, tmax - t);
    Eigen::MatrixXd K(n, 7);
    bool stage_failed = false;
    for (int st = 0; st < 7 && !stage_failed; ++st) {
      PathState sv = s;
      Eigen::VectorXd dq = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < st; ++j) dq += a[st][j] * K.col(j);
      sv.q = s.q + h * dq;
      (void)c;
      try {
        const Eigen::VectorXd* pp = prev.size() ? &prev : nullptr;
        K.col(st) = ode_rhs(sv, params, pp);
      } catch (const Error& e) {
        stage_failed = true;
        last_stage_failure = e.what();
      }
    }
    if (!stage_failed) {
      Eigen::VectorXd q5 = s.q, q4 = s.q;
      for (int st = 0; st < 7; ++st) {
        q5 += h * b5[st] * K.col(st);
        q4 += h * b4[st] * K.col(st);
      }
      const double err = (q5 - q4).norm();
      const double scale = tol * (1.0 + s.q.norm());
      if (q5.allFinite() && err <= scale) {
        PathState cand = s;
        cand.q = q5;
        project_state(cand);
        if (!domain_violation(cand).empty()) {
          // bisect the step size (full RK stages each trial) so the
          // trajectory lands on the boundary instead of being clamped past it
          auto try_step = [&](double hh, PathState& out) -> bool {
            Eigen::MatrixXd Kb(n, 7);
            for (int st = 0; st < 7; ++st) {
              PathState sv = s;
              Eigen::VectorXd dq = Eigen::VectorXd::Zero(n);
              for (int j = 0; j < st; ++j) dq += a[st][j] * Kb.col(j);
              sv.q = s.q + hh * dq;
              try {
                const Eigen::VectorXd* pp = prev.size() ? &prev : nullptr;
                Kb.col(st) = ode_rhs(sv, params, pp);
              } catch (const Error&) {
                return false;
              }
            }
            Eigen::VectorXd qn = s.q;
            for (int st = 0; st < 7; ++st) qn += hh * b5[st] * Kb.col(st);
            if (!qn.allFinite()) return false;
            out = s;
            out.q = qn;
            project_state(out);
            return domain_violation(out).empty();
          };
          double lo = 0.0, hi = h;
          PathState at_lo = s;
          for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + h); ++it) {
            const double mid = 0.5 * (lo + hi);
            PathState sm = s;
            if (try_step(mid, sm)) {
              lo = mid;
              at_lo = sm;
            } else {
              hi = mid;
            }
          }
          if (lo > 0.0) {
            t += lo;
            traj.t.push_back(t);
            traj.q.push_back(at_lo.q);
          }
          traj.stop = StopReason::DomainBoundary;
          PathState probe = s;
          (void)try_step(hi, probe);
          traj.stop_detail = domain_violation(probe);
          if (traj.stop_detail.empty()) traj.stop_detail = "domain boundary";
          return traj;
        }
        prev = K.col(0);
        s = cand;
        t += h;
        traj.t.push_back(t);
        traj.q.push_back(s.q);
      }
      double factor = 0.5;
      if (std::isfinite(err)) factor = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
      h *= std::min(4.0, std::max(0.2, factor));
    } else {
      // a stage left the admissible region: creep toward it with smaller steps
      h *= 0.5;
    }
    if (h < 1e-14) {
      traj.stop = StopReason::SingularLocus;
      traj.stop_detail = last_stage_failure.empty() ? "step size underflow" : last_stage_failure;
      return traj;
    }
  }
  traj.stop = StopReason::TMax;
  return traj;
}

ConservedValues conserved(const PathState& s, const G2Params& params) {
  switch (s.cse) {
    case SymCase::SO3xSO2:
      return ConservedValues{{"G"}, {G_eval(s.q(1), std::max(kTraceEps, s.q(0)), params.lambda)}};
    case SymCase::SU2:
      return ConservedValues{{"F"}, {F_eval(s.q(1), s.q(0), params.lambda)}};
    case SymCase::SO3Std:
      return reduce_so3_system(s, params);
    case SymCase::SO3Irr:
      return ConservedValues{{}, {}};
    default:
      throw DomainError("conserved: case has no path reduction");
  }
}

ConservedValues reduce_so3_system(const PathState& s, const G2Params& params) {
  if (s.cse != SymCase::SO3Std) throw DomainError("reduce_so3_system: SO3Std states only");
  const double x1 = s.q(0), x4 = s.q(1), x5 = s.q(2), a1 = s.q(3), a2 = s.q(4);
  const double L = params.lambda + a1 * a1 + a2 * a2;
  return ConservedValues{{"C", "D", "E"},
                         {x4 * x4 * x4 * x4 * L, x5 * x5 * x5 * x5 * L, a1 * x1}};
}

SweepReport sweep_and_verify(SymCase tag, const std::vector<PathState>& samples,
                             const G2Params& params, int n_group_samples, uint64_t seed) {
  Rng rng(seed);
  const auto& sc = symmetry_case(tag);
  const int n = static_cast<int>(sc.algebra.size());
  SweepReport rep;

  for (const PathState& s : samples) {
    TotalPoint p;
    Tangent cdot;
    try {
      p = to_total(s);
      const Eigen::VectorXd v = ode_rhs(s, params, nullptr);
      cdot = state_tangent(s, v);
    } catch (const SingularLocusError&) {
      ++rep.excluded;
      continue;
    } catch (const ChartDomainError&) {
      ++rep.excluded;
      continue;
    }

    auto eval_at = [&](const TotalPoint& q, const Tangent& cd) -> bool {
      std::vector<Tangent> fields;
      fields.reserve(static_cast<size_t>(n));
      Eigen::MatrixXd M(7, n);
      const CoframeData cf = chart_coframe(q.chart, q.base);
      for (int i = 0; i < n; ++i) {
        const Tangent f = fundamental_field(tag, i, q);
        fields.push_back(f);
        M.col(i) = lift_components(cf, q.fiber, f);
      }
      // pick three independent fields; the floor excludes near-degenerate
      // orbit strata where a field is too small for its finite-difference
      // direction to be trustworthy
      if (numerical_rank(M, 1e-8, 1e-5) < 3) return false;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
      std::array<Tangent, 4> span;
      for (int i = 0; i < 3; ++i)
        span[static_cast<size_t>(i)] =
            fields[static_cast<size_t>(qr.colsPermutation().indices()(i))];
      span[3] = cd;
      try {
        rep.max_residual = std::max(rep.max_residual, coassoc_residual(q, params, span));
      } catch (const DegenerateSpanError&) {
        return false;
      }
      return true;
    };

    if (!eval_at(p, cdot)) {
      ++rep.excluded;
      continue;
    }
    ++rep.samples_checked;

    for (int gidx = 0; gidx < n_group_samples; ++gidx) {
      Eigen::VectorXd coeff(n);
      for (int i = 0; i < n; ++i) coeff(i) = rng.uniform(-M_PI, M_PI);
      const GroupElement g = group_exp(tag, coeff);
      TotalPoint q;
      try {
        q = act_total(tag, g, p);
      } catch (const ChartDomainError&) {
        ++rep.excluded;
        continue;
      }
      const Tangent cd = push_tangent(g, p, cdot, q.chart);
      if (eval_at(q, cd))
        ++rep.samples_checked;
      else
        ++rep.excluded;
    }
  }
  return rep;
}

}  // namespace coassoc
