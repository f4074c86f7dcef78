#include "coassoc/g2.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace coassoc {

void validate_params(const G2Params& params, double r2) {
  if (params.lambda < 0.0) throw DomainError("lambda must be nonnegative");
  if (params.lambda == 0.0) {
    if (!params.cone_mode) throw DomainError("lambda = 0 requires cone mode");
    if (r2 <= G2Params::kConeRMin * G2Params::kConeRMin)
      throw DomainError("cone mode is undefined near the zero section");
  }
}

double s_lambda(const G2Params& params, double r2) {
  validate_params(params, r2);
  return std::pow(params.lambda + r2, 0.25);
}

const AltForm& phi0() {
  static const AltForm f = [] {
    AltForm p(3);
    p.add({0, 1, 2}, 1.0);
    p.add({0, 3, 4}, 1.0);
    p.add({0, 5, 6}, -1.0);
    p.add({1, 3, 5}, 1.0);
    p.add({1, 4, 6}, 1.0);
    p.add({2, 3, 6}, 1.0);
    p.add({2, 4, 5}, -1.0);
    return p;
  }();
  return f;
}

const AltForm& phi0_star() {
  static const AltForm f = [] {
    std::array<double, 7> id{1, 1, 1, 1, 1, 1, 1};
    return hodge_star_diag(phi0(), id);
  }();
  return f;
}

double phi0_eval(const Vec7& v1, const Vec7& v2, const Vec7& v3) {
  return phi0().eval3(v1, v2, v3);
}

Mat7 metric_from_phi(const AltForm& phi3, double vol_coeff) {
  if (phi3.degree() != 3) throw DomainError("metric_from_phi: need a 3-form");
  if (vol_coeff == 0.0) throw DegenerateFormError("metric_from_phi: zero volume");
  Mat7 g;
  std::array<AltForm, 7> contr = {AltForm(2), AltForm(2), AltForm(2), AltForm(2),
                                  AltForm(2), AltForm(2), AltForm(2)};
  for (int i = 0; i < 7; ++i) {
    Vec7 e = Vec7::Zero();
    e(i) = 1.0;
    contr[i] = phi3.interior(e);
  }
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      const AltForm w = contr[i].wedge(contr[j]).wedge(phi3);
      g(i, j) = g(j, i) = w[0] / (-6.0 * vol_coeff);
    }
  Eigen::SelfAdjointEigenSolver<Mat7> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw DegenerateFormError("metric_from_phi: recovered form is not positive definite");
  return g;
}

double metric_from_phi(const AltForm& phi3, double vol_coeff, const Vec7& v1, const Vec7& v2) {
  const Mat7 g = metric_from_phi(phi3, vol_coeff);
  return v1.dot(g * v2);
}

AltForm phi_lambda(const TotalPoint& p, const G2Params& params) {
  chart_coframe(p.chart, p.base);  // chart validity
  const double s = s_lambda(params, p.fiber.squaredNorm());
  AltForm f(3);
  // 2 s sum_i b_i ^ pi* omega_i + s^-3 b_123 on the lift frame
  f.add({0, 1, 4}, 2.0 * s);
  f.add({2, 3, 4}, -2.0 * s);
  f.add({0, 2, 5}, 2.0 * s);
  f.add({1, 3, 5}, 2.0 * s);
  f.add({0, 3, 6}, 2.0 * s);
  f.add({1, 2, 6}, -2.0 * s);
  f.add({4, 5, 6}, 1.0 / (s * s * s));
  return f;
}

std::array<double, 7> metric_diag(const G2Params& params, double r2) {
  const double s = s_lambda(params, r2);
  const double s2 = s * s;
  return {2 * s2, 2 * s2, 2 * s2, 2 * s2, 1 / s2, 1 / s2, 1 / s2};
}

double g_lambda(const TotalPoint& p, const G2Params& params, const Tangent& v, const Tangent& w) {
  const CoframeData cf = chart_coframe(p.chart, p.base);
  const Vec7 lv = lift_components(cf, p.fiber, v);
  const Vec7 lw = lift_components(cf, p.fiber, w);
  const auto g = metric_diag(params, p.fiber.squaredNorm());
  double total = 0.0;
  for (int i = 0; i < 7; ++i) total += g[i] * lv(i) * lw(i);
  return total;
}

AltForm hodge_star(const TotalPoint& p, const G2Params& params, const AltForm& a) {
  return hodge_star_diag(a, metric_diag(params, p.fiber.squaredNorm()));
}

AltForm exterior_derivative_fd(const FormField& field, const TotalPoint& p0, double h) {
  TotalPoint p = p0;
  if (p.chart != ChartId::StereoPhi && p.chart != ChartId::StereoPsi) {
    const ChartId target = p.base.x(4) >= 0.0 ? ChartId::StereoPsi : ChartId::StereoPhi;
    p = chart_transition(p, target);
  }
  const ChartId chart = p.chart;
  const Vec4 u0 = stereo_coords(chart, p.base.x);
  Eigen::Matrix<double, 7, 1> xi0;
  xi0 << u0, p.fiber;

  auto coord_comps = [&](const Eigen::Matrix<double, 7, 1>& xi) {
    const Vec5 x = stereo_point(chart, xi.head<4>());
    const TotalPoint q{chart, BasePoint{x}, xi.tail<3>()};
    const AltForm lift_comps = field(q);
    return change_covector_basis(lift_comps, lift_coframe_in_coords(chart, q.base, q.fiber));
  };

  const int k = field(p).degree();
  AltForm d(k + 1);
  const auto& cb = AltForm::combos(k);
  for (int j = 0; j < 7; ++j) {
    Eigen::Matrix<double, 7, 1> xp = xi0, xm = xi0;
    xp(j) += h;
    xm(j) -= h;
    const AltForm cp = coord_comps(xp);
    const AltForm cm = coord_comps(xm);
    for (size_t r = 0; r < cb.size(); ++r) {
      const double partial = (cp[static_cast<int>(r)] - cm[static_cast<int>(r)]) / (2.0 * h);
      if (partial == 0.0) continue;
      bool dup = false;
      for (int t = 0; t < k; ++t)
        if (cb[r][t] == j) dup = true;
      if (dup) continue;
      // sign of sorting (j, I)
      int sign = 1, pos = 0;
      while (pos < k && cb[r][pos] < j) ++pos;
      sign = (pos % 2 == 0) ? 1 : -1;
      int sorted[7];
      int t2 = 0;
      for (int t = 0; t < pos; ++t) sorted[t2++] = cb[r][t];
      sorted[t2++] = j;
      for (int t = pos; t < k; ++t) sorted[t2++] = cb[r][t];
      d[AltForm::rank_of(k + 1, sorted)] += sign * partial;
    }
  }
  // back to lift-frame components at p
  const Mat7 L = lift_coframe_in_coords(chart, p.base, p.fiber);
  return change_covector_basis(d, L.inverse());
}

double torsion_residual(const TotalPoint& p, const G2Params& params, double h, double tol) {
  FormField phi_field = [&](const TotalPoint& q) { return phi_lambda(q, params); };
  FormField star_field = [&](const TotalPoint& q) {
    return hodge_star(q, params, phi_lambda(q, params));
  };
  auto res = [&](double step) {
    const AltForm dphi = exterior_derivative_fd(phi_field, p, step);
    const AltForm dstar = exterior_derivative_fd(star_field, p, step);
    return std::pair<AltForm, AltForm>(dphi, dstar);
  };
  auto [dphi, dstar] = res(h);
  double worst = std::max(dphi.max_abs(), dstar.max_abs());
  if (worst > tol) {
    auto [dphi2, dstar2] = res(h / 2.0);
    AltForm rphi = dphi2, rstar = dstar2;
    rphi *= 4.0 / 3.0;
    dphi *= 1.0 / 3.0;
    rstar *= 4.0 / 3.0;
    dstar *= 1.0 / 3.0;
    for (int i = 0; i < rphi.size(); ++i) rphi[i] -= dphi[i];
    for (int i = 0; i < rstar.size(); ++i) rstar[i] -= dstar[i];
    worst = std::max(rphi.max_abs(), rstar.max_abs());
  }
  return worst;
}

double coassoc_residual(const TotalPoint& p, const G2Params& params,
                        const std::array<Tangent, 4>& span) {
  const CoframeData cf = chart_coframe(p.chart, p.base);
  std::array<Vec7, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = lift_components(cf, p.fiber, span[i]);

  Eigen::Matrix<double, 7, 4> M;
  for (int i = 0; i < 4; ++i) M.col(i) = v[i].normalized();
  const double gram = (M.transpose() * M).determinant();
  if (std::abs(gram) <= 1e-10)
    throw DegenerateSpanError("coassoc_residual: vectors do not span a 4-plane");

  const AltForm phi = phi_lambda(p, params);
  double worst = 0.0;
  for (int skip = 0; skip < 4; ++skip) {
    Vec7 tri[3];
    double nrm = 1.0;
    int t = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == skip) continue;
      tri[t++] = v[i];
      nrm *= v[i].norm();
    }
    worst = std::max(worst, std::abs(phi.eval(std::span<const Vec7>(tri, 3))) / nrm);
  }
  return worst;
}

}  // namespace coassoc
