// Test-only oracles, independent of the library's evaluation paths.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "coassoc/charts.hpp"
#include "coassoc/forms.hpp"

namespace coassoc::oracle {

// Dense representation of a k-form as a fully antisymmetric map evaluated by
// explicit permutation sums; used to cross-check wedge products and metrics.
inline double levi_civita_sign(const int* perm, int n) {
  int inv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv % 2 == 0 ? 1.0 : -1.0;
}

// Coefficient of e^{0..6} in alpha ^ beta ^ gamma (degrees 2, 2, 3) computed by
// brute force over all 7! permutations.
inline double wedge223_top_bruteforce(const AltForm& a2, const AltForm& b2, const AltForm& c3) {
  int perm[7] = {0, 1, 2, 3, 4, 5, 6};
  double total = 0.0;
  std::function<void(int)> rec = [&](int k) {
    if (k == 7) {
      const double s = levi_civita_sign(perm, 7);
      total += s * a2.coeff({perm[0], perm[1]}) * b2.coeff({perm[2], perm[3]}) *
               c3.coeff({perm[4], perm[5], perm[6]});
      return;
    }
    for (int i = k; i < 7; ++i) {
      std::swap(perm[k], perm[i]);
      rec(k + 1);
      std::swap(perm[k], perm[i]);
    }
  };
  rec(0);
  return total / (2.0 * 2.0 * 6.0);  // 2! 2! 3!
}

// Pointwise norm^2 of a k-form via full index contraction with inverse metric.
inline double norm_sq_bruteforce(const AltForm& a, const std::array<double, 7>& gdiag) {
  const int k = a.degree();
  std::vector<int> idx(static_cast<size_t>(k), 0);
  double total = 0.0;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k) {
      int buf[7];
      for (int i = 0; i < k; ++i) buf[i] = idx[static_cast<size_t>(i)];
      bool dup = false;
      for (int i = 0; i < k && !dup; ++i)
        for (int j = i + 1; j < k; ++j)
          if (buf[i] == buf[j]) dup = true;
      if (dup) return;
      std::initializer_list<int>* dummy = nullptr;
      (void)dummy;
      double c = 0.0;
      // signed coefficient lookup
      {
        int tmp[7];
        for (int i = 0; i < k; ++i) tmp[i] = buf[i];
        int sign = 1;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k - 1 - i; ++j)
            if (tmp[j] > tmp[j + 1]) {
              std::swap(tmp[j], tmp[j + 1]);
              sign = -sign;
            }
        c = sign * a[AltForm::rank_of(k, tmp)];
      }
      double w = c * c;
      for (int i = 0; i < k; ++i) w /= gdiag[static_cast<size_t>(buf[i])];
      total += w;
      return;
    }
    for (int v = 0; v < 7; ++v) {
      idx[static_cast<size_t>(pos)] = v;
      rec(pos + 1);
    }
  };
  rec(0);
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return total / fact;
}

// Composite Simpson on a fixed grid; quadrature oracle.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Finite-difference parallel-transport value of b_i on a curve through (x, a)
// with chart tangent (h4, v3); independent of the gamma tables.
inline Vec3 b_transport_oracle(ChartId chart, const BasePoint& bp, const Vec3& a,
                               const Vec4& h4, const Vec3& v3, double h = 1e-6) {
  const Mat54 E0 = chart_coframe(chart, bp).frame;
  const Vec5 hvec = E0 * h4;
  const auto& W = asd_patterns();
  auto sigma_on_pframe = [&](double t) {
    Vec5 xt = bp.x + t * hvec;
    xt /= xt.norm();
    const Vec3 at = a + t * v3;
    const Mat54 Et = chart_coframe(chart, BasePoint{xt}).frame;
    Mat4 vals = Mat4::Zero();
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        Vec5 uk = E0.col(k) - E0.col(k).dot(xt) * xt;
        Vec5 ul = E0.col(l) - E0.col(l).dot(xt) * xt;
        const Vec4 ukf = Et.transpose() * uk;
        const Vec4 ulf = Et.transpose() * ul;
        for (int i = 0; i < 3; ++i) vals(k, l) += at(i) * ukf.dot(W[i] * ulf);
      }
    return vals;
  };
  const Mat4 D = (sigma_on_pframe(h) - sigma_on_pframe(-h)) / (2.0 * h);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    double v = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) v += D(p, q) * W[i](p, q);
    out(i) = 0.5 * v;
  }
  return out;
}

}  // namespace coassoc::oracle
