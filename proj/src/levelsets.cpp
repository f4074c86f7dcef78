#include "coassoc/levelsets.hpp"

#include <cmath>

#include "coassoc/quadrature.hpp"

namespace coassoc {

namespace {

constexpr double kQuadTol = 1e-13;

double g_integral(double a1, double lambda) {
  return integrate_gk(
      [lambda](double x) { return (x * x + 2.0 * lambda) / std::pow(lambda + x * x, 0.75); },
      0.0, a1, kQuadTol);
}

double f_integral(double r, double lambda) {
  return integrate_gk(
      [lambda](double x) {
        return 2.0 * lambda / std::pow(lambda + x * x * x * x, 0.875);
      },
      0.0, std::sqrt(r), kQuadTol);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double target, double tol) {
  // assumes f monotone with f(lo) - target and f(hi) - target of opposite sign
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if (std::abs(fm) < tol) return mid;
    if ((fm > 0) == (flo - target > 0)) {
      lo = mid;
      flo = fm + target;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double G_eval(double a1, double x1, double lambda) {
  if (!(x1 > 0.0 && x1 <= 1.0)) throw DomainError("G_eval: x1 must lie in (0, 1]");
  if (lambda <= 0.0) throw DomainError("G_eval: lambda must be positive");
  return a1 * std::pow(lambda + a1 * a1, 0.25) * (2.0 * x1 * x1 - 1.0) +
         0.5 * g_integral(a1, lambda);
}

double F_eval(double r, double x5, double lambda) {
  if (r < 0.0) throw DomainError("F_eval: r must be nonnegative");
  if (lambda <= 0.0) throw DomainError("F_eval: lambda must be positive");
  return (1.0 - 3.0 * x5) * std::pow(lambda + r * r, 0.125) * std::sqrt(r) +
         f_integral(r, lambda);
}

double g_C(double a1, double C, double lambda) {
  if (a1 == 0.0) throw DomainError("g_C: a1 = 0");
  return (C - 0.5 * g_integral(a1, lambda)) / (a1 * std::pow(lambda + a1 * a1, 0.25));
}

double f_C(double r, double C, double lambda) {
  if (r <= 0.0) throw DomainError("f_C: r must be positive");
  return (C - f_integral(r, lambda)) / (std::sqrt(r) * std::pow(lambda + r * r, 0.125));
}

double roots_alpha(SymCase cse, double C, double lambda) {
  constexpr double tol = 1e-12;
  if (cse == SymCase::SU2) {
    // F(., -1) increases from 0 to +inf; root requires C > 0
    if (C <= 0.0) throw NoRootError("roots_alpha(su2): requires C > 0");
    auto f = [&](double r) { return F_eval(r, -1.0, lambda); };
    double hi = 1.0;
    while (f(hi) < C) hi *= 2.0;
    return bisect(f, 0.0, hi, 0.0, C, tol);
  }
  if (cse == SymCase::SO3xSO2) {
    // G(., 1) increases over R; any C has a root with the sign of C
    auto f = [&](double a) { return G_eval(a, 1.0, lambda); };
    double lo = -1.0, hi = 1.0;
    while (f(lo) > C) lo *= 2.0;
    while (f(hi) < C) hi *= 2.0;
    return bisect(f, lo, hi, f(lo), C, tol);
  }
  throw DomainError("roots_alpha: case has no boundary root");
}

double roots_beta(SymCase cse, double C, double lambda) {
  constexpr double tol = 1e-12;
  if (cse == SymCase::SU2) {
    // F(., +1) decreases from 0 to -inf; root requires C < 0
    if (C >= 0.0) throw NoRootError("roots_beta(su2): requires C < 0");
    auto f = [&](double r) { return F_eval(r, 1.0, lambda); };
    double hi = 1.0;
    while (f(hi) > C) hi *= 2.0;
    return bisect(f, 0.0, hi, 0.0, C, tol);
  }
  if (cse == SymCase::SO3xSO2) {
    // lim_{x1->0} G(., x1) = -a (l+a^2)^{1/4} + integral/2, decreasing over R
    auto f = [&](double a) {
      return -a * std::pow(lambda + a * a, 0.25) + 0.5 * g_integral(a, lambda);
    };
    double lo = -1.0, hi = 1.0;
    while (f(lo) < C) lo *= 2.0;
    while (f(hi) > C) hi *= 2.0;
    return bisect(f, lo, hi, f(lo), C, tol);
  }
  throw DomainError("roots_beta: case has no boundary root");
}

double LevelCurve::max_defining_residual(double lambda) const {
  double worst = 0.0;
  for (const auto& q : samples) {
    switch (cse) {
      case SymCase::SO3xSO2: {
        if (q(1) == 0.0) break;  // zero-section stratum satisfies G = 0 identically
        const double x1 = std::max(kTraceX1Eps, q(0));
        worst = std::max(worst, std::abs(G_eval(q(1), x1, lambda) - constants[0]));
        break;
      }
      case SymCase::SU2:
        worst = std::max(worst, std::abs(F_eval(q(1), q(0), lambda) - constants[0]));
        break;
      case SymCase::SO3Std: {
        const double L = lambda + q(3) * q(3) + q(4) * q(4);
        worst = std::max(worst, std::abs(std::pow(q(1), 4) * L - constants[0]));
        worst = std::max(worst, std::abs(std::pow(q(2), 4) * L - constants[1]));
        worst = std::max(worst, std::abs(q(3) * q(0) - constants[2]));
        break;
      }
      default:
        break;
    }
  }
  return worst;
}

std::vector<PathState> LevelCurve::states(const Vec3& dir) const {
  std::vector<PathState> out;
  out.reserve(samples.size());
  for (const auto& q : samples) out.push_back(PathState{cse, q, dir});
  return out;
}

namespace {

// Predictor-corrector continuation of a 2D level curve H = C with an FD
// gradient; used for the (a1, x1) and (x5, r) pictures.
struct Plane2D {
  std::function<double(const Eigen::Vector2d&)> H;
  std::function<bool(const Eigen::Vector2d&)> inside;
};

std::vector<Eigen::VectorXd> continue_curve(const Plane2D& pl, Eigen::Vector2d seed, double C,
                                            Eigen::Vector2d init_dir, double step,
                                            int max_samples) {
  std::vector<Eigen::VectorXd> out;
  auto grad = [&](const Eigen::Vector2d& p) {
    const double h = 1e-6;
    Eigen::Vector2d g;
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d pp = p, pm = p;
      pp(i) += h;
      pm(i) -= h;
      g(i) = (pl.H(pp) - pl.H(pm)) / (2.0 * h);
    }
    return g;
  };
  auto correct = [&](Eigen::Vector2d p) {
    for (int it = 0; it < 8; ++it) {
      const double r = pl.H(p) - C;
      if (std::abs(r) < 1e-12) break;
      const Eigen::Vector2d g = grad(p);
      const double gn2 = g.squaredNorm();
      if (gn2 < 1e-28) break;
      p -= g * (r / gn2);
    }
    return p;
  };

  Eigen::Vector2d p = correct(seed);
  Eigen::Vector2d dir = init_dir.normalized();
  out.push_back(Eigen::VectorXd(p));
  for (int i = 0; i < max_samples; ++i) {
    const Eigen::Vector2d g = grad(p);
    Eigen::Vector2d tang(-g(1), g(0));
    if (tang.norm() < 1e-14) break;
    tang.normalize();
    if (tang.dot(dir) < 0.0) tang = -tang;
    Eigen::Vector2d next = correct(p + step * tang);
    if (!pl.inside(next)) {
      // shrink into the box and stop
      double s = step;
      for (int cut = 0; cut < 30 && !pl.inside(next); ++cut) {
        s *= 0.5;
        next = correct(p + s * tang);
      }
      if (pl.inside(next) && (next - p).norm() > 1e-12) out.push_back(Eigen::VectorXd(next));
      break;
    }
    dir = (next - p).normalized();
    p = next;
    out.push_back(Eigen::VectorXd(p));
  }
  return out;
}

LevelCurve trace_so3xso2_branch(double C, double lambda, int resolution, bool positive) {
  // plane coordinates (a1, x1); PathState layout is (x1, a1).
  // H extends the closed formula past x1 = 1 so boundary gradients stay central.
  Plane2D pl;
  pl.H = [lambda](const Eigen::Vector2d& p) {
    const double a1 = p(0), x1 = p(1);
    return a1 * std::pow(lambda + a1 * a1, 0.25) * (2.0 * x1 * x1 - 1.0) +
           0.5 * g_integral(a1, lambda);
  };
  pl.inside = [positive](const Eigen::Vector2d& p) {
    if (positive && p(0) <= 0.0) return false;
    if (!positive && p(0) >= 0.0) return false;
    return std::abs(p(0)) <= kTraceSpan && p(1) >= kTraceX1Eps && p(1) <= 1.0;
  };

  Eigen::Vector2d seed, dir;
  std::string first_label;
  const double sgn = positive ? 1.0 : -1.0;
  const bool closes_at_top = (positive && C > 0.0) || (!positive && C < 0.0);
  if (closes_at_top) {
    seed << roots_alpha(SymCase::SO3xSO2, C, lambda), 1.0;
    dir << sgn, 0.0;
    first_label = "x1 = 1";
  } else {
    // start at the excluded x1 -> 0 edge
    if (C == 0.0) {
      seed << sgn * kTraceX1Eps * std::sqrt(6.0 * lambda), kTraceX1Eps;
    } else {
      auto f = [&](double t) { return G_eval(sgn * t, kTraceX1Eps, lambda); };
      double lo = 1e-12, hi = 1.0;
      while ((f(lo) - C) * (f(hi) - C) > 0.0 && hi < 1e7) hi *= 2.0;
      seed << sgn * bisect(f, lo, hi, f(lo), C, 1e-12), kTraceX1Eps;
    }
    dir << sgn, 1.0;
    first_label = "x1 -> 0 (excluded)";
  }

  const double step = 2.0 * (kTraceSpan + 1.0) / resolution;
  auto pts = continue_curve(pl, seed, C, dir, step, 40 * resolution);

  LevelCurve lc;
  lc.cse = SymCase::SO3xSO2;
  lc.constants = {C};
  lc.stratum = positive ? "a1>0" : "a1<0";
  lc.topology = closes_at_top ? "S^2xR^2" : "S^2xS^1xR_{>0}";
  lc.endpoints = {first_label, "open end |a1| -> inf"};
  lc.samples.reserve(pts.size());
  for (const auto& p : pts) {
    Eigen::VectorXd q(2);
    q << p(1), p(0);  // (x1, a1)
    lc.samples.push_back(q);
  }
  return lc;
}

LevelCurve zero_section_so3xso2(int resolution) {
  LevelCurve lc;
  lc.cse = SymCase::SO3xSO2;
  lc.constants = {0.0};
  lc.stratum = "zero-section";
  lc.topology = "S^4";
  lc.endpoints = {"x1 -> 0 (excluded)", "x1 = 1"};
  for (int i = 0; i < resolution; ++i) {
    const double x1 = kTraceX1Eps + (1.0 - kTraceX1Eps) * i / (resolution - 1.0);
    Eigen::VectorXd q(2);
    q << x1, 0.0;
    lc.samples.push_back(q);
  }
  return lc;
}

LevelCurve trace_su2_branch(double C, double lambda, int resolution) {
  // plane coordinates (x5, r) matching the PathState layout; the formula
  // extends past x5 = +-1 so boundary gradients stay central
  Plane2D pl;
  pl.H = [lambda](const Eigen::Vector2d& p) {
    const double r = std::max(1e-300, p(1)), x5 = p(0);
    return (1.0 - 3.0 * x5) * std::pow(lambda + r * r, 0.125) * std::sqrt(r) +
           f_integral(r, lambda);
  };
  pl.inside = [](const Eigen::Vector2d& p) {
    return p(0) >= -1.0 && p(0) <= 1.0 && p(1) > 0.0 && p(1) <= kTraceSpan;
  };
  Eigen::Vector2d seed, dir;
  std::string first_label;
  if (C > 0.0) {
    seed << -1.0, roots_alpha(SymCase::SU2, C, lambda);
    dir << 1.0, 1.0;
    first_label = "x5 = -1";
  } else if (C < 0.0) {
    seed << 1.0, roots_beta(SymCase::SU2, C, lambda);
    dir << -1.0, 1.0;
    first_label = "x5 = 1";
  } else {
    const double r0 = 1e-5;
    seed << (1.0 - f_C(r0, 0.0, lambda)) / 3.0, r0;
    dir << -1.0, 1.0;
    first_label = "x5 -> 1, r -> 0 (excluded corner)";
  }
  const double step = 2.0 * (kTraceSpan + 2.0) / resolution;
  auto pts = continue_curve(pl, seed, C, dir, step, 40 * resolution);

  LevelCurve lc;
  lc.cse = SymCase::SU2;
  lc.constants = {C};
  lc.stratum = "main";
  lc.topology = C > 0.0 ? "R^4" : (C < 0.0 ? "O_{CP^1}(-1)" : "S^3xR_{>0}");
  lc.endpoints = {first_label, "open end r -> inf"};
  lc.samples = std::move(pts);
  return lc;
}

LevelCurve zero_section_su2(int resolution) {
  LevelCurve lc;
  lc.cse = SymCase::SU2;
  lc.constants = {0.0};
  lc.stratum = "zero-section";
  lc.topology = "S^4";
  lc.endpoints = {"x5 = -1", "x5 = 1"};
  for (int i = 0; i < resolution; ++i) {
    const double x5 = -1.0 + 2.0 * i / (resolution - 1.0);
    Eigen::VectorXd q(2);
    q << x5, 0.0;
    lc.samples.push_back(q);
  }
  return lc;
}

bool singular_row(double C, double D, double E, double lambda) {
  return E == 0.0 &&
         std::abs(std::sqrt(C) + std::sqrt(D) - std::sqrt(lambda)) < 1e-10 * std::max(1.0, std::sqrt(lambda));
}

std::vector<LevelCurve> trace_so3std(const std::vector<double>& cde, double lambda,
                                     int resolution) {
  const double C = cde[0], D = cde[1], E = cde[2];
  if (C < 0.0 || D < 0.0)
    throw NoRootError("x4^4 (l+r^2) and x5^4 (l+r^2) are nonnegative; empty level set");
  const double sCD = std::sqrt(C) + std::sqrt(D);

  auto x1_of = [&](double r) {
    return std::sqrt(std::max(0.0, 1.0 - sCD / std::sqrt(lambda + r * r)));
  };
  double rmin = std::sqrt(std::max(0.0, sCD * sCD - lambda));
  std::string start_label;
  if (E != 0.0) {
    auto g = [&](double r) { return r * x1_of(r); };
    double hi = std::max(1.0, 2.0 * rmin + 1.0);
    while (g(hi) < std::abs(E)) hi *= 2.0;
    rmin = bisect(g, rmin, hi, g(rmin), std::abs(E), 1e-13);
    start_label = "a2 = 0 turning point";
  } else if (rmin == 0.0) {
    start_label = singular_row(C, D, E, lambda) ? "conical point (r = 0, x1 = 0)"
                                                : "r = 0 (zero-section point)";
  } else {
    start_label = "x1 = 0";
  }

  std::vector<int> s4 = C > 0.0 ? std::vector<int>{+1, -1} : std::vector<int>{0};
  std::vector<int> s5 = D > 0.0 ? std::vector<int>{+1, -1} : std::vector<int>{0};
  const std::string topo = singular_row(C, D, E, lambda) ? "N" : "TS^2";

  std::vector<LevelCurve> out;
  for (int sa : s4)
    for (int sb : s5) {
      LevelCurve lc;
      lc.cse = SymCase::SO3Std;
      lc.constants = cde;
      lc.topology = topo;
      auto stag = [](int s) { return s > 0 ? "+" : (s < 0 ? "-" : "0"); };
      lc.stratum = std::string("x4:") + stag(sa) + ",x5:" + stag(sb);
      lc.endpoints = {start_label, "open end r -> inf"};
      for (int i = 0; i < resolution; ++i) {
        const double r = rmin + (kTraceSpan - rmin) * i / (resolution - 1.0);
        const double L = lambda + r * r;
        const double x4 = sa * std::pow(C / L, 0.25);
        const double x5 = sb * std::pow(D / L, 0.25);
        const double x1 = std::sqrt(std::max(0.0, 1.0 - x4 * x4 - x5 * x5));
        const double a1 = E != 0.0 ? E / std::max(x1, 1e-300) : 0.0;
        const double a2 = std::sqrt(std::max(0.0, r * r - a1 * a1));
        Eigen::VectorXd q(5);
        q << x1, x4, x5, a1, a2;
        lc.samples.push_back(q);
      }
      out.push_back(std::move(lc));
    }
  return out;
}

}  // namespace

std::vector<LevelCurve> trace_level(SymCase cse, const std::vector<double>& constants,
                                    double lambda, int resolution) {
  if (resolution < 16) throw DomainError("trace_level: resolution must be >= 16");
  switch (cse) {
    case SymCase::SO3xSO2: {
      const double C = constants.at(0);
      std::vector<LevelCurve> out;
      out.push_back(trace_so3xso2_branch(C, lambda, resolution, true));
      out.push_back(trace_so3xso2_branch(C, lambda, resolution, false));
      if (C == 0.0) out.push_back(zero_section_so3xso2(resolution));
      return out;
    }
    case SymCase::SU2: {
      const double C = constants.at(0);
      std::vector<LevelCurve> out;
      out.push_back(trace_su2_branch(C, lambda, resolution));
      if (C == 0.0) out.push_back(zero_section_su2(resolution));
      return out;
    }
    case SymCase::SO3Std:
      if (constants.size() != 3) throw DomainError("trace_level(so3std): need (C, D, E)");
      return trace_so3std(constants, lambda, resolution);
    default:
      throw DomainError("trace_level: case has no level-set family");
  }
}

ComponentReport component_report(SymCase cse, const std::vector<double>& constants,
                                 double lambda) {
  const auto curves = trace_level(cse, constants, lambda, 32);
  ComponentReport rep;
  rep.count = static_cast<int>(curves.size());
  for (const auto& c : curves) {
    rep.labels.push_back(c.stratum);
    rep.topology.push_back(c.topology);
  }
  return rep;
}

LevelCurve asymptotic_curve(SymCase cse, double C, const std::vector<double>& grid) {
  LevelCurve lc;
  lc.cse = cse;
  lc.constants = {C};
  lc.stratum = "asymptote";
  lc.endpoints = {"grid start", "grid end"};
  if (cse == SymCase::SU2) {
    for (double r : grid) {
      Eigen::VectorXd q(2);
      q << (1.0 - C * std::pow(r, -0.75)) / 3.0, r;
      lc.samples.push_back(q);
    }
    return lc;
  }
  if (cse == SymCase::SO3xSO2) {
    for (double a1 : grid) {
      const double t = C / (a1 * std::sqrt(std::abs(a1))) + 2.0 / 3.0;
      Eigen::VectorXd q(2);
      q << std::sqrt(std::max(0.0, 0.5 * t)), a1;
      lc.samples.push_back(q);
    }
    return lc;
  }
  throw DomainError("asymptotic_curve: only SO3xSO2 and SU2 have cone limits");
}

double cone_profile(double lambda, double r) {
  // 2 l^{1/4} sqrt(1 - sqrt(2/(2+r^2))) in a cancellation-free arrangement
  const double q = (r * r / (2.0 + r * r)) / (1.0 + std::sqrt(2.0 / (2.0 + r * r)));
  return 2.0 * std::pow(lambda, 0.25) * std::sqrt(q);
}

RateReport singular_rate_check(double lambda, const std::vector<double>& r_samples) {
  if (r_samples.size() < 3) throw DomainError("singular_rate_check: need at least 3 samples");
  const double l14 = std::pow(lambda, 0.25);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  double rmin = r_samples.front();
  for (double r : r_samples) {
    rmin = std::min(rmin, r);
    const double d = std::abs(cone_profile(lambda, r) - l14 * r);
    if (d <= 0.0) continue;
    const double X = std::log(r), Y = std::log(d);
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    ++n;
  }
  RateReport rep;
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.limit_ratio = cone_profile(lambda, rmin) / rmin;
  return rep;
}

}  // namespace coassoc
