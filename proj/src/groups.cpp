#include "coassoc/groups.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace coassoc {

namespace {

const double kSqrt3 = std::sqrt(3.0);

Mat5 skew5(int i, int j) {
  Mat5 m = Mat5::Zero();
  m(i, j) = -1.0;
  m(j, i) = 1.0;
  return m;
}

std::vector<Mat5> so3_block_basis() {
  // (basis of so3) embedded in the top-left 3x3 block
  return {skew5(0, 1), skew5(0, 2), skew5(1, 2)};
}

std::vector<Mat5> su2_diag_basis() {
  const Eigen::Matrix2d J = (Eigen::Matrix2d() << 0, -1, 1, 0).finished();
  const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();
  auto blocks = [](const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, const Eigen::Matrix2d& c,
                   const Eigen::Matrix2d& d) {
    Mat5 m = Mat5::Zero();
    m.block<2, 2>(0, 0) = a;
    m.block<2, 2>(0, 2) = b;
    m.block<2, 2>(2, 0) = c;
    m.block<2, 2>(2, 2) = d;
    return m;
  };
  return {blocks(0 * I2, I2, -I2, 0 * I2), blocks(0 * I2, J, J, 0 * I2),
          blocks(J, 0 * I2, 0 * I2, -J)};
}

std::vector<Mat5> irr_basis() {
  const Eigen::Matrix2d J = (Eigen::Matrix2d() << 0, -1, 1, 0).finished();
  Mat5 e1 = Mat5::Zero(), e2 = Mat5::Zero(), e3 = Mat5::Zero();
  e1.block<2, 2>(0, 2) = J;
  e1.block<2, 2>(2, 0) = J;
  e1(3, 4) = kSqrt3;
  e1(4, 3) = -kSqrt3;
  e2.block<2, 2>(0, 0) = -2 * J;
  e2.block<2, 2>(2, 2) = -J;
  e3.block<2, 2>(0, 2) = -Eigen::Matrix2d::Identity();
  e3.block<2, 2>(2, 0) = Eigen::Matrix2d::Identity();
  e3(2, 4) = -kSqrt3;
  e3(4, 2) = kSqrt3;
  return {e1, e2, e3};
}

bool is_orthogonal5(const Mat5& m, double tol) {
  return (m.transpose() * m - Mat5::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(m.determinant() - 1.0) < tol;
}

Eigen::Matrix2cd complex_of_real4(const Mat5& m) {
  // inverse of su2_real_embedding on the top 4x4 block
  Eigen::Matrix2cd u;
  u(0, 0) = std::complex<double>(m(0, 0), m(1, 0));
  u(1, 0) = std::complex<double>(m(2, 0), m(3, 0));
  u(0, 1) = std::complex<double>(m(0, 2), m(1, 2));
  u(1, 1) = std::complex<double>(m(2, 2), m(3, 2));
  return u;
}

const Mat5 kComplexStructure = [] {
  Mat5 j = Mat5::Zero();
  j(0, 1) = -1; j(1, 0) = 1; j(2, 3) = -1; j(3, 2) = 1;
  return j;
}();

Mat3 rot3_align_to_e1(const Vec3& v) {
  const double n = v.norm();
  if (n < 1e-14) return Mat3::Identity();
  const Vec3 a = v / n;
  const Vec3 b(1, 0, 0);
  const Vec3 cr = a.cross(b);
  const double c = a.dot(b);
  if (cr.norm() < 1e-14) {
    if (c > 0) return Mat3::Identity();
    Mat3 r = Mat3::Identity();  // half turn about e2
    r(0, 0) = -1;
    r(2, 2) = -1;
    return r;
  }
  Mat3 K = Mat3::Zero();
  K(0, 1) = -cr(2); K(0, 2) = cr(1);
  K(1, 0) = cr(2); K(1, 2) = -cr(0);
  K(2, 0) = -cr(1); K(2, 1) = cr(0);
  return Mat3::Identity() + K + K * K / (1.0 + c);
}

Eigen::Matrix2d rot2_align_to_e1(const Eigen::Vector2d& v) {
  const double n = v.norm();
  if (n < 1e-14) return Eigen::Matrix2d::Identity();
  const double c = v(0) / n, s = v(1) / n;
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

Eigen::Matrix4d rot4_align_to_e1(const Eigen::Vector4d& v) {
  const double n = v.norm();
  if (n < 1e-14) return Eigen::Matrix4d::Identity();
  Eigen::Vector4d a = v / n;
  Eigen::Vector4d e1 = Eigen::Vector4d::Unit(0);
  Eigen::Vector4d w = a - e1;
  if (w.norm() < 1e-14) return Eigen::Matrix4d::Identity();
  w.normalize();
  Eigen::Matrix4d H = Eigen::Matrix4d::Identity() - 2.0 * w * w.transpose();  // H a = e1
  Eigen::Matrix4d D = Eigen::Matrix4d::Identity();
  D(3, 3) = -1.0;  // restore det = +1; fixes e1
  return D * H;
}

// Lifted action without the membership check, used on elements already known
// to belong to the subgroup.
TotalPoint act_lift(const Mat5& m, const TotalPoint& p, ChartId target) {
  const Vec5 x2 = m * p.base.x;
  const Mat54 Es = chart_coframe(p.chart, p.base).frame;
  const Mat54 Ed = chart_coframe(target, BasePoint{x2}).frame;
  const Mat4 V = Es.transpose() * (m.transpose() * Ed);
  const auto& W = asd_patterns();
  Mat3 R;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      const Mat4 M = V.transpose() * W[i] * V;
      double v = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) v += W[j](k, l) * M(k, l);
      R(j, i) = 0.5 * v;
    }
  return TotalPoint{target, make_base_point(x2), polar_rotation(R) * p.fiber};
}

// Chart suitable for finite differencing around p; pole charts and the FRAME
// margin cannot host a neighborhood.
ChartId differential_chart(const TotalPoint& p) {
  const double x5 = p.base.x(4);
  switch (p.chart) {
    case ChartId::PolePlus: return ChartId::StereoPsi;
    case ChartId::PoleMinus: return ChartId::StereoPhi;
    case ChartId::Frame:
      if (std::abs(x5) > 1.0 - 10.0 * kChartDelta)
        return x5 >= 0.0 ? ChartId::StereoPsi : ChartId::StereoPhi;
      return ChartId::Frame;
    default: return p.chart;
  }
}

}  // namespace

std::string case_name(SymCase c) {
  switch (c) {
    case SymCase::SO4: return "so4";
    case SymCase::SO3xSO2: return "so3xso2";
    case SymCase::U2: return "u2";
    case SymCase::SU2: return "su2";
    case SymCase::SO3Std: return "so3std";
    case SymCase::SO3Irr: return "so3irr";
  }
  return "?";
}

SymCase case_from_name(const std::string& s) {
  if (s == "so4") return SymCase::SO4;
  if (s == "so3xso2") return SymCase::SO3xSO2;
  if (s == "u2") return SymCase::U2;
  if (s == "su2") return SymCase::SU2;
  if (s == "so3std") return SymCase::SO3Std;
  if (s == "so3irr") return SymCase::SO3Irr;
  throw ConfigError("unknown symmetry case: " + s);
}

const SymmetryCase& symmetry_case(SymCase tag) {
  static const SymmetryCase so4 = [] {
    std::vector<Mat5> b;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) b.push_back(skew5(i, j));
    return SymmetryCase{SymCase::SO4, b, 6};
  }();
  static const SymmetryCase so3xso2 = [] {
    auto b = so3_block_basis();
    b.push_back(skew5(3, 4));
    return SymmetryCase{SymCase::SO3xSO2, b, 4};
  }();
  static const SymmetryCase u2 = [] {
    auto b = su2_diag_basis();
    Mat5 e4 = Mat5::Zero();
    e4(0, 1) = -1; e4(1, 0) = 1; e4(2, 3) = -1; e4(3, 2) = 1;
    b.push_back(e4);
    return SymmetryCase{SymCase::U2, b, 4};
  }();
  static const SymmetryCase su2{SymCase::SU2, su2_diag_basis(), 3};
  static const SymmetryCase so3std{SymCase::SO3Std, so3_block_basis(), 3};
  static const SymmetryCase so3irr{SymCase::SO3Irr, irr_basis(), 3};
  switch (tag) {
    case SymCase::SO4: return so4;
    case SymCase::SO3xSO2: return so3xso2;
    case SymCase::U2: return u2;
    case SymCase::SU2: return su2;
    case SymCase::SO3Std: return so3std;
    case SymCase::SO3Irr: return so3irr;
  }
  throw DomainError("symmetry_case: bad tag");
}

GroupElement group_exp(SymCase tag, const Eigen::VectorXd& coeffs) {
  const auto& sc = symmetry_case(tag);
  if (coeffs.size() != static_cast<Eigen::Index>(sc.algebra.size()))
    throw DomainError("group_exp: coefficient arity mismatch");
  Mat5 a = Mat5::Zero();
  for (size_t i = 0; i < sc.algebra.size(); ++i) a += coeffs(static_cast<int>(i)) * sc.algebra[i];
  return GroupElement{a.exp()};
}

bool in_subgroup(SymCase tag, const Mat5& m, double tol) {
  if (!is_orthogonal5(m, tol)) return false;
  const Vec5 e5 = (Vec5() << 0, 0, 0, 0, 1).finished();
  switch (tag) {
    case SymCase::SO4:
      return (m * e5 - e5).cwiseAbs().maxCoeff() < tol;
    case SymCase::SO3xSO2: {
      if (m.block<3, 2>(0, 3).cwiseAbs().maxCoeff() > tol) return false;
      if (m.block<2, 3>(3, 0).cwiseAbs().maxCoeff() > tol) return false;
      return std::abs(m.block<3, 3>(0, 0).determinant() - 1.0) < tol &&
             std::abs(m.block<2, 2>(3, 3).determinant() - 1.0) < tol;
    }
    case SymCase::U2:
      return (m * e5 - e5).cwiseAbs().maxCoeff() < tol &&
             (m * kComplexStructure - kComplexStructure * m).cwiseAbs().maxCoeff() < tol;
    case SymCase::SU2: {
      if (!in_subgroup(SymCase::U2, m, tol)) return false;
      return std::abs(complex_of_real4(m).determinant() - 1.0) < tol;
    }
    case SymCase::SO3Std: {
      const Vec5 e4 = (Vec5() << 0, 0, 0, 1, 0).finished();
      return (m * e4 - e4).cwiseAbs().maxCoeff() < tol &&
             (m * e5 - e5).cwiseAbs().maxCoeff() < tol;
    }
    case SymCase::SO3Irr: {
      // the image of the irreducible representation is its own normalizer in SO(5)
      const auto& alg = symmetry_case(SymCase::SO3Irr).algebra;
      Eigen::MatrixXd span(25, 3);
      for (int i = 0; i < 3; ++i)
        span.col(i) = Eigen::Map<const Eigen::VectorXd>(alg[i].data(), 25);
      const Eigen::MatrixXd proj =
          span * (span.transpose() * span).inverse() * span.transpose();
      for (int i = 0; i < 3; ++i) {
        const Mat5 ad = m * alg[i] * m.transpose();
        const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(ad.data(), 25);
        if ((v - proj * v).cwiseAbs().maxCoeff() > tol) return false;
      }
      return true;
    }
  }
  return false;
}

Mat3 su2_covering(const std::complex<double>& a, const std::complex<double>& b) {
  using std::conj;
  Mat3 r;
  r(0, 0) = std::norm(a) - std::norm(b);
  r(0, 1) = 2.0 * (a * b).imag();
  r(0, 2) = -2.0 * (a * b).real();
  r(1, 0) = -2.0 * (conj(a) * b).imag();
  r(1, 1) = (a * a + b * b).real();
  r(1, 2) = (a * a + b * b).imag();
  r(2, 0) = 2.0 * (conj(a) * b).real();
  r(2, 1) = (-a * a + b * b).imag();
  r(2, 2) = (a * a - b * b).real();
  return r;
}

Mat5 su2_real_embedding(const std::complex<double>& a, const std::complex<double>& b) {
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  Mat5 m = Mat5::Zero();
  // z1' = a z1 - conj(b) z2, z2' = b z1 + conj(a) z2 with z1 = x1+ix2, z2 = x3+ix4
  m(0, 0) = ar; m(0, 1) = -ai; m(0, 2) = -br; m(0, 3) = -bi;
  m(1, 0) = ai; m(1, 1) = ar; m(1, 2) = bi; m(1, 3) = -br;
  m(2, 0) = br; m(2, 1) = -bi; m(2, 2) = ar; m(2, 3) = ai;
  m(3, 0) = bi; m(3, 1) = br; m(3, 2) = -ai; m(3, 3) = ar;
  m(4, 4) = 1.0;
  return m;
}

Vec5 sym_to_vec(const Mat3& s) {
  return (Vec5() << s(0, 0) + 0.5 * s(1, 1), -s(0, 2), s(1, 2), s(0, 1), -0.5 * kSqrt3 * s(1, 1))
      .finished();
}

Mat3 vec_to_sym(const Vec5& v) {
  const double l2 = -2.0 * v(4) / kSqrt3;
  const double l1 = v(0) - 0.5 * l2;
  Mat3 s;
  s << l1, v(3), -v(1), v(3), l2, v(2), -v(1), v(2), -l1 - l2;
  return s;
}

Mat5 irr_embedding(const Mat3& h) {
  Mat5 m;
  for (int i = 0; i < 5; ++i) {
    Vec5 e = Vec5::Zero();
    e(i) = 1.0;
    m.col(i) = sym_to_vec(h * vec_to_sym(e) * h.transpose());
  }
  return m;
}

TotalPoint act_total(SymCase tag, const GroupElement& g, const TotalPoint& p) {
  if (!in_subgroup(tag, g.m))
    throw NotInSubgroupError("act_total: element not in " + case_name(tag));
  const Vec5 x2 = g.m * p.base.x;
  ChartId target = p.chart;
  if (!chart_admits(target, x2)) target = preferred_chart(x2);
  return act_lift(g.m, p, target);
}

Tangent push_tangent(const GroupElement& g, const TotalPoint& p0, const Tangent& t0,
                     ChartId target) {
  TotalPoint p = p0;
  Tangent t = t0;
  const ChartId safe = differential_chart(p0);
  if (safe != p.chart) {
    t = tangent_transition(p, t, safe);
    p = chart_transition(p, safe);
  }
  const CoframeData cf = chart_coframe(p.chart, p.base);
  const Vec5 hvec = cf.frame * t.horiz;
  const Vec5 x2 = g.m * p.base.x;
  const Mat54 Ed = chart_coframe(target, BasePoint{x2}).frame;

  auto fiber_at = [&](double s) {
    Vec5 xs = p.base.x + s * hvec;
    xs /= xs.norm();
    const TotalPoint q{p.chart, BasePoint{xs}, p.fiber + s * t.vert};
    return act_lift(g.m, q, target).fiber;
  };
  const double h = 1e-3;
  const Vec3 va =
      (-fiber_at(2 * h) + 8.0 * fiber_at(h) - 8.0 * fiber_at(-h) + fiber_at(-2 * h)) / (12.0 * h);
  Tangent out;
  out.horiz = Ed.transpose() * (g.m * hvec);
  out.vert = va;
  return out;
}

Tangent fundamental_field(SymCase tag, int i, const TotalPoint& p0) {
  const auto& sc = symmetry_case(tag);
  if (i < 0 || i >= static_cast<int>(sc.algebra.size()))
    throw DomainError("fundamental_field: index out of range");
  const Mat5& E = sc.algebra[static_cast<size_t>(i)];

  TotalPoint p = p0;
  const ChartId safe = differential_chart(p0);
  if (safe != p.chart) p = chart_transition(p, safe);
  const CoframeData cf = chart_coframe(p.chart, p.base);

  auto fiber_at = [&](double t) {
    const Mat5 g = (t * E).exp();
    return act_lift(g, p, p.chart).fiber;
  };
  const double h = 1e-3;
  const Vec3 va =
      (-fiber_at(2 * h) + 8.0 * fiber_at(h) - 8.0 * fiber_at(-h) + fiber_at(-2 * h)) / (12.0 * h);
  Tangent out;
  out.horiz = cf.frame.transpose() * (E * p.base.x);
  out.vert = va;
  if (safe != p0.chart) out = tangent_transition(p, out, p0.chart);
  return out;
}

bool on_slice(SymCase tag, const TotalPoint& p, double tol) {
  const Vec5& x = p.base.x;
  switch (tag) {
    case SymCase::SO4:
      return std::abs(x(1)) < tol && std::abs(x(2)) < tol && std::abs(x(3)) < tol &&
             x(0) > -tol;
    case SymCase::SO3xSO2:
      return std::abs(x(1)) < tol && std::abs(x(2)) < tol && std::abs(x(4)) < tol &&
             x(0) > -tol && x(3) > -tol;
    case SymCase::U2:
    case SymCase::SU2:
      return std::abs(x(1)) < tol && std::abs(x(2)) < tol && std::abs(x(3)) < tol && x(0) > -tol;
    case SymCase::SO3Std:
      return std::abs(x(1)) < tol && std::abs(x(2)) < tol && x(0) > -tol &&
             std::abs(p.fiber(2)) < tol;
    case SymCase::SO3Irr:
      return std::abs(x(1)) < tol && std::abs(x(2)) < tol && std::abs(x(3)) < tol &&
             x(0) > tol && std::abs(x(4)) <= 0.5 + tol;
  }
  return false;
}

SlicePosition to_slice(SymCase tag, const TotalPoint& p) {
  const Vec5& x = p.base.x;
  Mat5 m = Mat5::Identity();
  switch (tag) {
    case SymCase::SO4:
      m.block<4, 4>(0, 0) = rot4_align_to_e1(x.head<4>());
      break;
    case SymCase::SO3xSO2:
      m.block<3, 3>(0, 0) = rot3_align_to_e1(x.head<3>());
      m.block<2, 2>(3, 3) = rot2_align_to_e1(x.tail<2>());
      break;
    case SymCase::U2:
    case SymCase::SU2: {
      const std::complex<double> z1(x(0), x(1)), z2(x(2), x(3));
      const double n = std::sqrt(std::norm(z1) + std::norm(z2));
      if (n > 1e-14) m = su2_real_embedding(std::conj(z1) / n, -z2 / n);
      break;
    }
    case SymCase::SO3Std: {
      m.block<3, 3>(0, 0) = rot3_align_to_e1(x.head<3>());
      // rotate (a2,a3) to (>=0, 0) with the stabilizer of (x1,0,0)
      const Vec5 xr = m * x;
      const TotalPoint q = act_lift(m, p, preferred_chart(xr));
      const double phi = std::atan2(q.fiber(2), q.fiber(1));
      Mat5 stab = Mat5::Identity();
      const double c = std::cos(phi), s = std::sin(phi);
      stab(1, 1) = c; stab(1, 2) = -s; stab(2, 1) = s; stab(2, 2) = c;
      m = stab * m;
      break;
    }
    case SymCase::SO3Irr: {
      const Mat3 X = vec_to_sym(x);
      Eigen::SelfAdjointEigenSolver<Mat3> es(X);
      Mat3 h;  // eigenvalues descending
      h.col(0) = es.eigenvectors().col(2);
      h.col(1) = es.eigenvectors().col(1);
      h.col(2) = es.eigenvectors().col(0);
      if (h.determinant() < 0) h.col(2) = -h.col(2);
      m = irr_embedding(Mat3(h.transpose()));
      break;
    }
  }
  const GroupElement g{m};
  TotalPoint q = act_total(tag, g, p);
  if (chart_admits(ChartId::Frame, q.base.x) && q.chart != ChartId::Frame)
    q = chart_transition(q, ChartId::Frame);
  Vec5 xx = q.base.x;
  switch (tag) {
    case SymCase::SO4: case SymCase::U2: case SymCase::SU2: case SymCase::SO3Irr:
      xx(1) = xx(2) = xx(3) = 0.0;
      break;
    case SymCase::SO3xSO2:
      xx(1) = xx(2) = xx(4) = 0.0;
      break;
    case SymCase::SO3Std:
      xx(1) = xx(2) = 0.0;
      break;
  }
  q.base = make_base_point(xx);
  if (tag == SymCase::SO3Std) q.fiber(2) = 0.0;
  return SlicePosition{g, q};
}

Tangent fundamental_field_closed(SymCase tag, int i, const TotalPoint& p) {
  if (!on_slice(tag, p, 1e-9))
    throw SliceError("fundamental_field_closed: point off the canonical slice");
  const Vec5& x = p.base.x;
  const Vec3& a = p.fiber;
  Tangent t;
  switch (tag) {
    case SymCase::SO3xSO2: {
      const double x1 = x(0), x4 = x(3);
      switch (i) {
        case 0:
          t.horiz << x1 * x1, x1 * x4, 0, 0;
          t.vert << -a(1), a(0), 0;
          return t;
        case 1:
          t.horiz << -x1 * x4, x1 * x1, 0, 0;
          t.vert << a(2), 0, -a(0);
          return t;
        case 2:
          t.vert << 0, a(2), -a(1);
          return t;
        case 3:
          t.horiz << 0, 0, 0, x4;
          t.vert << 0, -x1 * a(2), x1 * a(1);
          return t;
      }
      break;
    }
    case SymCase::U2:
    case SymCase::SU2: {
      const double x1 = x(0);
      switch (i) {
        case 0: t.horiz << 0, -x1, 0, 0; return t;
        case 1: t.horiz << 0, 0, x1, 0; return t;
        case 2: t.horiz << x1, 0, 0, 0; return t;
        case 3:
          t.horiz << x1, 0, 0, 0;
          t.vert << -2 * a(1), 2 * a(0), 0;
          return t;
      }
      break;
    }
    case SymCase::SO3Std: {
      const double x1 = x(0), x4 = x(3), x5 = x(4);
      const double q = std::sqrt(1.0 - x5 * x5);
      switch (i) {
        case 0:
          t.horiz << x1 * x1 / q, x1 * x4 / q, 0, 0;
          t.vert << -a(1), a(0), 0;
          return t;
        case 1:
          t.horiz << -x1 * x4 / q, x1 * x1 / q, 0, 0;
          t.vert << 0, 0, -a(0);
          return t;
        case 2:
          t.vert << 0, 0, -a(1);
          return t;
      }
      break;
    }
    case SymCase::SO3Irr: {
      const double x1 = x(0), x5 = x(4);
      const double c = kSqrt3 * (1.0 + x5) / x1;
      switch (i) {
        case 0:
          t.horiz << 0, 0, x1 + kSqrt3 * x5, 0;
          t.vert << 0, c * a(2), -c * a(1);
          return t;
        case 1:
          t.horiz << -2 * x1, 0, 0, 0;
          t.vert << 3 * a(1), -3 * a(0), 0;
          return t;
        case 2:
          t.horiz << 0, x1 - kSqrt3 * x5, 0, 0;
          t.vert << -c * a(2), 0, c * a(0);
          return t;
      }
      break;
    }
    default: break;
  }
  throw DomainError("fundamental_field_closed: no closed form for this case/index");
}

OrbitInfo orbit_info(SymCase tag, const TotalPoint& p) {
  const auto& sc = symmetry_case(tag);
  Eigen::MatrixXd M(7, static_cast<Eigen::Index>(sc.algebra.size()));
  for (size_t i = 0; i < sc.algebra.size(); ++i) {
    const Tangent t = fundamental_field(tag, static_cast<int>(i), p);
    Vec7 w;
    w << t.horiz, t.vert;
    M.col(static_cast<Eigen::Index>(i)) = w;
  }
  OrbitInfo out;
  out.dimension = numerical_rank(M, 1e-8);

  const SlicePosition sp = to_slice(tag, p);
  const Vec5& x = sp.p.base.x;
  const Vec3& a = sp.p.fiber;
  const double tol = 1e-9;
  const double anorm = a.norm();
  auto near1 = [&](double v) { return std::abs(v - 1.0) < tol; };
  switch (tag) {
    case SymCase::SO4: {
      const bool pole = near1(std::abs(x(4)));
      if (!pole)
        out.label = anorm > tol ? "SO(4)/SO(2)" : "S^3";
      else
        out.label = anorm > tol ? "S^2" : "*";
      break;
    }
    case SymCase::SO3xSO2: {
      const double x1 = x(0);
      const double a23 = std::hypot(a(1), a(2));
      if (x1 > tol && x1 < 1.0 - tol)
        out.label = a23 > tol ? "SO(3)xSO(2)" : "S^2xS^1";
      else if (near1(x1))
        out.label = a23 > tol ? "SO(3)xSO(2)/SO(2)" : "S^2";
      else
        out.label = anorm > tol ? "S^2xS^1" : "S^1";
      break;
    }
    case SymCase::U2: {
      const double x5 = x(4);
      if (std::abs(x5) < 1.0 - tol) {
        out.label = std::hypot(a(0), a(1)) > tol ? "U(2)" : "S^3";
      } else if (x5 > 0) {
        out.label = anorm > tol ? "S^2" : "*";
      } else {
        // south-pole conditions are read in the pole frame coordinates
        const TotalPoint q = chart_transition(sp.p, ChartId::PoleMinus);
        out.label = std::hypot(q.fiber(1), q.fiber(2)) > tol ? "S^1" : "*";
      }
      break;
    }
    case SymCase::SU2: {
      const double x5 = x(4);
      if (std::abs(x5) < 1.0 - tol)
        out.label = "S^3";
      else if (x5 > 0)
        out.label = anorm > tol ? "S^2" : "*";
      else
        out.label = "*";
      break;
    }
    case SymCase::SO3Std: {
      const double x1 = x(0);
      const double a23 = std::hypot(a(1), a(2));
      if (x1 > tol)
        out.label = a23 > tol ? "SO(3)" : "S^2";
      else
        out.label = anorm > tol ? "S^2" : "*";
      break;
    }
    case SymCase::SO3Irr: {
      const double x5 = x(4);
      const bool boundary = std::abs(std::abs(x5) - 0.5) < tol;
      int zeros = 0;
      for (int i = 0; i < 3; ++i)
        if (std::abs(a(i)) < tol) ++zeros;
      if (!boundary) {
        if (zeros == 3)
          out.label = "SO(3)/(Z_2xZ_2)";
        else if (zeros == 2)
          out.label = "SO(3)/Z_2";
        else
          out.label = "SO(3)";
      } else {
        // x5 = +1/2 tests (a2; a1,a3); x5 = -1/2 tests (a1; a2,a3)
        const double lone = x5 > 0 ? a(1) : a(0);
        const double pair = x5 > 0 ? std::hypot(a(0), a(2)) : std::hypot(a(1), a(2));
        if (anorm < tol)
          out.label = "RP^2";
        else if (std::abs(lone) > tol)
          out.label = pair > tol ? "SO(3)" : "S^2";
        else
          out.label = "SO(3)/Z_2";
      }
      break;
    }
  }
  return out;
}

namespace {

DataTables tables_closed(SymCase tag, const TotalPoint& p) {
  const Vec5& x = p.base.x;
  const Vec3& a = p.fiber;
  DataTables t;
  const double x1 = x(0);
  switch (tag) {
    case SymCase::SO3xSO2: {
      const double x4 = x(3);
      t.pairs = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
      t.omega.setZero(6, 3);
      t.omega(0, 0) = x1 * x1;
      t.omega(3, 1) = x1 * x4 * x4;
      t.omega(3, 2) = x1 * x1 * x4;
      t.omega(4, 1) = x1 * x1 * x4;
      t.omega(4, 2) = -x1 * x4 * x4;
      t.b.setZero(3, 4);
      t.b(0, 0) = -x4 * (a(1) * x4 + a(2) * x1);
      t.b(0, 1) = x4 * (-a(1) * x1 + a(2) * x4);
      t.b(1, 0) = a(0) * x4 * x4;
      t.b(1, 1) = a(0) * x1 * x4;
      t.b(1, 2) = a(2);
      t.b(1, 3) = -a(2) * x1;
      t.b(2, 0) = a(0) * x1 * x4;
      t.b(2, 1) = -a(0) * x4 * x4;
      t.b(2, 2) = -a(1);
      t.b(2, 3) = a(1) * x1;
      break;
    }
    case SymCase::U2:
    case SymCase::SU2: {
      const double x5 = x(4);
      const int dim = tag == SymCase::U2 ? 4 : 3;
      t.pairs = {{0, 1}, {0, 2}, {1, 2}};
      if (dim == 4) {
        t.pairs.push_back({0, 3});
        t.pairs.push_back({1, 3});
        t.pairs.push_back({2, 3});
      }
      t.omega.setZero(static_cast<Eigen::Index>(t.pairs.size()), 3);
      t.omega(0, 2) = x1 * x1;
      t.omega(1, 0) = x1 * x1;
      t.omega(2, 1) = -x1 * x1;
      if (dim == 4) {
        t.omega(3, 0) = x1 * x1;
        t.omega(4, 1) = -x1 * x1;
      }
      t.b.setZero(3, dim);
      const double f = 1.0 + x5;
      t.b(0, 0) = f * a(2);
      t.b(0, 2) = f * a(1);
      t.b(1, 1) = -f * a(2);
      t.b(1, 2) = -f * a(0);
      t.b(2, 0) = -f * a(0);
      t.b(2, 1) = f * a(1);
      if (dim == 4) {
        t.b(0, 3) = (-1.0 + x5) * a(1);
        t.b(1, 3) = (1.0 - x5) * a(0);
      }
      break;
    }
    case SymCase::SO3Std: {
      const double x4 = x(3), x5 = x(4);
      t.pairs = {{0, 1}, {0, 2}, {1, 2}};
      t.omega.setZero(3, 3);
      t.omega(0, 0) = x1 * x1;
      t.b.setZero(3, 3);
      const double q = x1 * x1 / (1.0 - x5);
      const double pfac = x1 * x4 / (1.0 - x5);
      t.b(0, 0) = (-1.0 + q) * a(1);
      t.b(0, 1) = -pfac * a(1);
      t.b(1, 0) = (1.0 - q) * a(0);
      t.b(1, 1) = pfac * a(0);
      t.b(2, 0) = pfac * a(0);
      t.b(2, 1) = (-1.0 + q) * a(0);
      t.b(2, 2) = -a(1);
      break;
    }
    case SymCase::SO3Irr: {
      const double x5 = x(4);
      t.pairs = {{0, 1}, {0, 2}, {1, 2}};
      t.omega.setZero(3, 3);
      t.omega(0, 1) = 2.0 * x1 * (x1 + kSqrt3 * x5);
      t.omega(1, 2) = x1 * x1 - 3.0 * x5 * x5;
      t.omega(2, 0) = 2.0 * x1 * (-x1 + kSqrt3 * x5);
      t.b.setZero(3, 3);
      t.b(0, 1) = (1.0 - 2.0 * x5) * a(1);
      t.b(0, 2) = -(kSqrt3 * x1 + x5 + 1.0) * a(2);
      t.b(1, 0) = (kSqrt3 * x1 - x5 - 1.0) * a(2);
      t.b(1, 1) = (-1.0 + 2.0 * x5) * a(0);
      t.b(2, 0) = (-kSqrt3 * x1 + x5 + 1.0) * a(1);
      t.b(2, 2) = (kSqrt3 * x1 + x5 + 1.0) * a(0);
      break;
    }
    default:
      throw DomainError("data_tables: no lemma table for this case");
  }
  return t;
}

DataTables tables_numeric(SymCase tag, const TotalPoint& p,
                          const std::vector<std::array<int, 2>>& pairs, int dim) {
  const CoframeData cf = chart_coframe(p.chart, p.base);
  const auto& W = asd_patterns();
  std::vector<Tangent> f;
  f.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) f.push_back(fundamental_field(tag, i, p));
  DataTables t;
  t.pairs = pairs;
  t.omega.setZero(static_cast<Eigen::Index>(pairs.size()), 3);
  for (size_t r = 0; r < pairs.size(); ++r)
    for (int j = 0; j < 3; ++j)
      t.omega(static_cast<Eigen::Index>(r), j) =
          f[static_cast<size_t>(pairs[r][0])].horiz.dot(
              W[j] * f[static_cast<size_t>(pairs[r][1])].horiz);
  t.b.setZero(3, dim);
  const auto B = cf.bforms(p.fiber);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec7 w;
      w << f[static_cast<size_t>(j)].horiz, f[static_cast<size_t>(j)].vert;
      t.b(i, j) = B[i].dot(w);
    }
  return t;
}

}  // namespace

DataTablePair data_tables(SymCase tag, const TotalPoint& p) {
  TotalPoint q = p;
  if (!on_slice(tag, q, 1e-9)) q = to_slice(tag, p).p;
  if (!on_slice(tag, q, 1e-7)) throw SliceError("data_tables: cannot reach the canonical slice");
  DataTablePair out;
  out.closed_form = tables_closed(tag, q);
  out.numeric = tables_numeric(tag, q, out.closed_form.pairs,
                               static_cast<int>(symmetry_case(tag).algebra.size()));
  return out;
}

}  // namespace coassoc
