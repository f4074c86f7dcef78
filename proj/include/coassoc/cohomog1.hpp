#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coassoc/groups.hpp"

namespace coassoc {

// Curve state in the case's slice coordinates:
//   SO3xSO2: (x1, a1)      with base (x1,0,0,sqrt(1-x1^2),0), fiber (a1,0,0)
//   SU2:     (x5, r)       with base (sqrt(1-x5^2),0,0,0,x5), fiber r*dir
//   SO3Std:  (x1,x4,x5,a1,a2) base (x1,0,0,x4,x5), fiber (a1,a2,0)
//   SO3Irr:  (x1,x5,a1,a2,a3) base (x1,0,0,0,x5), x1^2+x5^2 = 1
struct PathState {
  SymCase cse = SymCase::SO3Std;
  Eigen::VectorXd q;
  Vec3 dir = Vec3(1, 0, 0);  // SU2 fiber direction v
};

int state_dim(SymCase);
std::vector<std::string> state_names(SymCase);

TotalPoint to_total(const PathState&);
Tangent state_tangent(const PathState&, const Eigen::VectorXd& qdot);

// Linear relations A(q) qdot = 0 cutting out the coassociative direction
// (per-case reduced equations plus the sphere constraint).
Eigen::MatrixXd velocity_relations(const PathState&, const G2Params&);

// Unit kernel generator, oriented to continue `prev` when given.
// Throws SingularLocusError when the kernel is not one-dimensional.
Eigen::VectorXd ode_rhs(const PathState&, const G2Params&,
                        const Eigen::VectorXd* prev = nullptr);

// All phi(E_i*, E_j*, cdot) and phi(E_i*, E_j*, E_k*) over the case's basis.
std::vector<double> residual_vector(const PathState&, const G2Params&, const Tangent& cdot);

enum class StopReason { TMax, DomainBoundary, SingularLocus };
std::string stop_name(StopReason);

struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> q;
  StopReason stop = StopReason::TMax;
  std::string stop_detail;
};

// Adaptive embedded RK (Dormand-Prince 5(4)) with per-step projection onto the
// sphere constraint. Stops at tmax, the domain boundary, or a singular locus.
// `init_dir` seeds the orientation of the direction field when given.
Trajectory integrate(const PathState&, const G2Params&, double tmax, double tol,
                     const Eigen::VectorXd* init_dir = nullptr);

struct ConservedValues {
  std::vector<std::string> names;
  std::vector<double> values;
};

ConservedValues conserved(const PathState&, const G2Params&);
// The reduced first integrals (C, D, E) = (x4^4(l+r^2), x5^4(l+r^2), a1 x1).
ConservedValues reduce_so3_system(const PathState&, const G2Params&);

struct SweepReport {
  double max_residual = 0.0;
  int samples_checked = 0;
  int excluded = 0;  // samples skipped at degenerate-orbit strata
};

// At each sample: span {three independent fundamental fields, cdot}, move it
// by random subgroup elements, take the worst coassociativity residual.
SweepReport sweep_and_verify(SymCase, const std::vector<PathState>& samples, const G2Params&,
                             int n_group_samples, uint64_t seed);

}  // namespace coassoc
