#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <vector>

#include "coassoc/linalg.hpp"

namespace coassoc {

// Alternating k-form on a fixed 7-dimensional frame. Components are stored on
// the canonical (lexicographically ordered) index combinations.
class AltForm {
 public:
  explicit AltForm(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(c_.size()); }
  double operator[](int r) const { return c_[r]; }
  double& operator[](int r) { return c_[r]; }

  // Signed access by arbitrary index tuple (0-based indices).
  double coeff(std::initializer_list<int> idx) const;
  void add(std::initializer_list<int> idx, double v);

  // Evaluation on degree() vectors given by their frame components.
  double eval(std::span<const Vec7> vectors) const;
  double eval3(const Vec7& a, const Vec7& b, const Vec7& c) const;

  AltForm wedge(const AltForm& other) const;
  AltForm interior(const Vec7& v) const;

  double max_abs() const;

  AltForm& operator+=(const AltForm& o);
  AltForm& operator*=(double s);

  // Canonical combination table for degree k; entries beyond k are -1.
  static const std::vector<std::array<int, 7>>& combos(int k);
  static int rank_of(int k, const int* idx);
  static int binom(int n, int k);

 private:
  int degree_;
  std::vector<double> c_;
};

// Hodge star for a diagonal metric on the frame, orientation given by the
// frame order.
AltForm hodge_star_diag(const AltForm& a, const std::array<double, 7>& metric_diag);

// Components of `a` in the basis B when the current basis covectors satisfy
// eps^m = sum_n L(m,n) B^n.
AltForm change_covector_basis(const AltForm& a, const Mat7& L);

// Pointwise norm squared with a diagonal metric.
double form_norm_sq_diag(const AltForm& a, const std::array<double, 7>& metric_diag);

}  // namespace coassoc
