#pragma once

#include <array>
#include <string>
#include <vector>

#include "coassoc/cohomog1.hpp"

namespace coassoc {

// First integrals of the two explicitly solvable reductions.
double G_eval(double a1, double x1, double lambda);  // DomainError unless x1 in (0,1]
double F_eval(double r, double x5, double lambda);   // DomainError unless r >= 0

// Analysis helpers: G = C <=> 2 x1^2 - 1 = g_C(a1); F = C <=> 1 - 3 x5 = f_C(r).
double g_C(double a1, double C, double lambda);
double f_C(double r, double C, double lambda);

// Boundary roots: SU2: F(alpha_C, -1) = C (C > 0), F(beta_C, +1) = C (C < 0);
// SO3xSO2: G(alpha_C, 1) = C, lim_{x1->0} G(beta_C, x1) = C.
double roots_alpha(SymCase, double C, double lambda);
double roots_beta(SymCase, double C, double lambda);

inline constexpr double kTraceX1Eps = 1e-6;  // x1 = 0 exclusion for G
inline constexpr double kTraceSpan = 8.0;    // open-end cutoff of traced curves

struct LevelCurve {
  SymCase cse = SymCase::SO3Std;
  std::vector<double> constants;
  std::vector<Eigen::VectorXd> samples;  // PathState layout per case
  std::string stratum;
  std::string topology;
  std::array<std::string, 2> endpoints;

  double max_defining_residual(double lambda) const;
  std::vector<PathState> states(const Vec3& dir = Vec3(1, 0, 0)) const;
};

// Traces the level set into its connected components (parameter-space slice
// picture). Throws NoRootError when the set is empty in the admissible box.
std::vector<LevelCurve> trace_level(SymCase, const std::vector<double>& constants,
                                    double lambda, int resolution);

struct ComponentReport {
  int count = 0;
  std::vector<std::string> labels;
  std::vector<std::string> topology;
};

ComponentReport component_report(SymCase, const std::vector<double>& constants, double lambda);

// lambda = 0 limit curves sampled on the given parameter grid (a1 for
// SO3xSO2, r for SU2).
LevelCurve asymptotic_curve(SymCase, double C, const std::vector<double>& grid);

struct RateReport {
  double slope = 0.0;        // log-log exponent of f(r) - lambda^{1/4} r
  double limit_ratio = 0.0;  // f(r)/r at the smallest sample
};

RateReport singular_rate_check(double lambda, const std::vector<double>& r_samples);

// Desingularization profile f(r) of the conically singular example.
double cone_profile(double lambda, double r);

}  // namespace coassoc
