#pragma once

#include <complex>
#include <string>
#include <vector>

#include "coassoc/charts.hpp"
#include "coassoc/g2.hpp"

namespace coassoc {

enum class SymCase { SO4, SO3xSO2, U2, SU2, SO3Std, SO3Irr };

std::string case_name(SymCase);
SymCase case_from_name(const std::string&);

struct SymmetryCase {
  SymCase tag;
  std::vector<Mat5> algebra;  // antisymmetric basis matrices E_i
  int dim;
};

const SymmetryCase& symmetry_case(SymCase);

struct GroupElement {
  Mat5 m;
};

GroupElement group_exp(SymCase, const Eigen::VectorXd& coeffs);
bool in_subgroup(SymCase, const Mat5& m, double tol = 1e-8);

// The double covering SU(2) -> SO(3) in the form used by the stereo-chart lift.
Mat3 su2_covering(const std::complex<double>& a, const std::complex<double>& b);
// Real 5x5 image of [[a, -conj b],[b, conj a]] under z1 = x1+ix2, z2 = x3+ix4.
Mat5 su2_real_embedding(const std::complex<double>& a, const std::complex<double>& b);
// Real 5x5 image of h in SO(3) under the conjugation action on symmetric
// traceless matrices.
Mat5 irr_embedding(const Mat3& h);
Vec5 sym_to_vec(const Mat3& sym);
Mat3 vec_to_sym(const Vec5& v);

// Lifted action on the bundle. Auto-transitions the result chart when the
// image base leaves the current chart.
TotalPoint act_total(SymCase, const GroupElement&, const TotalPoint&);

// Pushforward of a tangent under the lifted action; `target` is the chart of
// the moved point (as produced by act_total).
Tangent push_tangent(const GroupElement&, const TotalPoint&, const Tangent&, ChartId target);

// Fundamental vector field of basis element i at p (finite differences of the
// lifted flow; valid in any chart).
Tangent fundamental_field(SymCase, int i, const TotalPoint&);
// Closed forms from the per-case displays; requires p on the canonical slice.
Tangent fundamental_field_closed(SymCase, int i, const TotalPoint&);

struct OrbitInfo {
  int dimension = 0;
  std::string label;
};

OrbitInfo orbit_info(SymCase, const TotalPoint&);

struct SlicePosition {
  GroupElement g;   // g maps the input point onto the slice
  TotalPoint p;     // the slice representative (FRAME chart when possible)
};

SlicePosition to_slice(SymCase, const TotalPoint&);
bool on_slice(SymCase, const TotalPoint&, double tol = 1e-9);

struct DataTables {
  std::vector<std::array<int, 2>> pairs;  // (i,k) index pairs for the omega table
  Eigen::MatrixXd omega;                  // pairs x 3: pi* omega_j(E_i*, E_k*)
  Eigen::MatrixXd b;                      // 3 x dim: b_i(E_j*)
};

struct DataTablePair {
  DataTables closed_form;
  DataTables numeric;
};

// Evaluates the per-case lemma tables twice (closed form and frame-level
// recomputation). Off-slice points are first moved onto the slice.
DataTablePair data_tables(SymCase, const TotalPoint&);

}  // namespace coassoc
