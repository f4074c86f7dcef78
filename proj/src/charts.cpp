#include "coassoc/charts.hpp"

#include <cmath>

namespace coassoc {

namespace {

// Connection coefficients of the orthonormal coframe: nabla_{e_k} e^j =
// sum_m C[k][j][m] e^m.
using ConnTable = std::array<std::array<std::array<double, 4>, 4>, 4>;

ConnTable conn_frame_chart(const Vec5& x) {
  const double x5 = x(4);
  const double c0 = 1.0 / std::sqrt(1.0 - x5 * x5);
  ConnTable C{};
  C[0][0][3] = x5 * c0; C[0][1][2] = -c0; C[0][2][1] = c0; C[0][3][0] = -x5 * c0;
  C[1][0][2] = c0; C[1][1][3] = x5 * c0; C[1][2][0] = -c0; C[1][3][1] = -x5 * c0;
  C[2][0][1] = -c0; C[2][1][0] = c0; C[2][2][3] = x5 * c0; C[2][3][2] = -x5 * c0;
  return C;
}

// Conformally flat chart with coframe theta^i = c du_i, c = 2/(1+|u|^2):
// nabla_{e_k} theta^j = -u_j theta^k + delta_jk sum_m u_m theta^m.
ConnTable conn_conformal(const Vec4& u) {
  ConnTable C{};
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 4; ++m)
        C[k][j][m] = -u(j) * (m == k ? 1.0 : 0.0) + u(m) * (j == k ? 1.0 : 0.0);
  return C;
}

void gamma_from_conn(const ConnTable& C, double gamma[3][3][4]) {
  const auto& W = asd_patterns();
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 3; ++i) {
      Mat4 Q = Mat4::Zero();
      for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q) {
          const double w = W[i](p, q);
          if (w == 0.0) continue;
          for (int m = 0; m < 4; ++m) {
            Q(m, q) += w * C[k][p][m];
            Q(q, m) -= w * C[k][p][m];
            Q(p, m) += w * C[k][q][m];
            Q(m, p) -= w * C[k][q][m];
          }
        }
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        for (int p = 0; p < 4; ++p)
          for (int q = p + 1; q < 4; ++q) v += Q(p, q) * W[j](p, q);
        gamma[i][j][k] = 0.5 * v;
      }
    }
  }
}

Mat54 frame_matrix_frame_chart(const Vec5& x) {
  const double x1 = x(0), x2 = x(1), x3 = x(2), x4 = x(3), x5 = x(4);
  const double q = std::sqrt(1.0 - x5 * x5);
  Mat54 E;
  E.col(0) << -x2, x1, -x4, x3, 0.0;
  E.col(1) << -x3, x4, x1, -x2, 0.0;
  E.col(2) << -x4, -x3, x2, x1, 0.0;
  E.col(3) << -x1 * x5, -x2 * x5, -x3 * x5, -x4 * x5, 1.0 - x5 * x5;
  return E / q;
}

Mat54 frame_matrix_stereo(ChartId chart, const Vec5& x) {
  const Vec4 u = stereo_coords(chart, x);
  const double D = 1.0 + u.squaredNorm();
  Mat54 E = Mat54::Zero();
  if (chart == ChartId::StereoPsi) {
    for (int k = 0; k < 4; ++k) {
      for (int i = 0; i < 4; ++i) E(i, k) = (i == k ? 1.0 : 0.0) - 2.0 * u(i) * u(k) / D;
      E(4, k) = -2.0 * u(k) / D;
    }
  } else {
    for (int k = 0; k < 4; ++k) {
      for (int i = 0; i < 3; ++i) E(i, k) = (i == k ? 1.0 : 0.0) - 2.0 * u(i) * u(k) / D;
      E(3, k) = -((k == 3 ? 1.0 : 0.0) - 2.0 * u(3) * u(k) / D);
      E(4, k) = 2.0 * u(k) / D;
    }
  }
  return E;
}

Mat54 pole_frame_matrix(int sign) {
  Mat54 E = Mat54::Zero();
  E(0, 0) = E(1, 1) = E(2, 2) = 1.0;
  E(3, 3) = sign > 0 ? 1.0 : -1.0;
  return E;
}

}  // namespace

std::string chart_name(ChartId c) {
  switch (c) {
    case ChartId::Frame: return "FRAME";
    case ChartId::PolePlus: return "POLE_PLUS";
    case ChartId::PoleMinus: return "POLE_MINUS";
    case ChartId::StereoPhi: return "STEREO_PHI";
    case ChartId::StereoPsi: return "STEREO_PSI";
  }
  return "?";
}

ChartId chart_from_name(const std::string& s) {
  if (s == "FRAME") return ChartId::Frame;
  if (s == "POLE_PLUS") return ChartId::PolePlus;
  if (s == "POLE_MINUS") return ChartId::PoleMinus;
  if (s == "STEREO_PHI") return ChartId::StereoPhi;
  if (s == "STEREO_PSI") return ChartId::StereoPsi;
  throw ConfigError("unknown chart: " + s);
}

BasePoint make_base_point(const Vec5& x) {
  const double n = x.norm();
  if (std::abs(n - 1.0) > 1e-9) throw DomainError("base point not on the unit sphere");
  return BasePoint{x / n};
}

const std::array<Mat4, 3>& asd_patterns() {
  static const std::array<Mat4, 3> W = [] {
    std::array<Mat4, 3> w{};
    for (auto& m : w) m = Mat4::Zero();
    w[0](0, 1) = 1; w[0](2, 3) = -1;
    w[1](0, 2) = 1; w[1](1, 3) = 1;
    w[2](0, 3) = 1; w[2](1, 2) = -1;
    for (auto& m : w) m -= Mat4(m.transpose());
    return w;
  }();
  return W;
}

bool chart_admits(ChartId chart, const Vec5& x) {
  const double x5 = x(4);
  switch (chart) {
    case ChartId::Frame: return std::abs(x5) <= 1.0 - kChartDelta;
    case ChartId::PolePlus: return std::abs(x5 - 1.0) < 1e-12;
    case ChartId::PoleMinus: return std::abs(x5 + 1.0) < 1e-12;
    case ChartId::StereoPhi: return x5 < 1.0 - kStereoGuard;
    case ChartId::StereoPsi: return x5 > -1.0 + kStereoGuard;
  }
  return false;
}

ChartId preferred_chart(const Vec5& x) {
  if (chart_admits(ChartId::Frame, x)) return ChartId::Frame;
  return x(4) >= 0.0 ? ChartId::StereoPsi : ChartId::StereoPhi;
}

CoframeData frame_at(const BasePoint& b) {
  if (!chart_admits(ChartId::Frame, b.x))
    throw ChartDomainError("frame_at: |x5| too close to 1");
  CoframeData out;
  out.frame = frame_matrix_frame_chart(b.x);
  gamma_from_conn(conn_frame_chart(b.x), out.gamma);
  return out;
}

CoframeData pole_frame(int sign) {
  CoframeData out;
  out.frame = pole_frame_matrix(sign);
  out.has_gamma = false;
  return out;
}

CoframeData chart_coframe(ChartId chart, const BasePoint& b) {
  if (!chart_admits(chart, b.x))
    throw ChartDomainError("chart_coframe: point outside chart " + chart_name(chart));
  switch (chart) {
    case ChartId::Frame: return frame_at(b);
    case ChartId::PolePlus: return pole_frame(+1);
    case ChartId::PoleMinus: return pole_frame(-1);
    case ChartId::StereoPhi:
    case ChartId::StereoPsi: {
      CoframeData out;
      out.frame = frame_matrix_stereo(chart, b.x);
      gamma_from_conn(conn_conformal(stereo_coords(chart, b.x)), out.gamma);
      return out;
    }
  }
  throw ChartDomainError("chart_coframe: bad chart");
}

std::array<Vec7, 3> CoframeData::bforms(const Vec3& fiber) const {
  std::array<Vec7, 3> out;
  for (int i = 0; i < 3; ++i) {
    Vec7 b = Vec7::Zero();
    b(4 + i) = 1.0;
    if (has_gamma)
      for (int k = 0; k < 4; ++k) {
        double v = 0.0;
        for (int j = 0; j < 3; ++j) v += fiber(j) * gamma[j][i][k];
        b(k) = v;
      }
    out[i] = b;
  }
  return out;
}

Mat3 transition_rotation(ChartId src, ChartId dst, const BasePoint& b) {
  const Mat54 Es = chart_coframe(src, b).frame;
  const Mat54 Ed = chart_coframe(dst, b).frame;
  const Mat4 V = Es.transpose() * Ed;
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
  const double res = (R.transpose() * R - Mat3::Identity()).norm();
  if (res > 1e-8)
    throw ChartDomainError("transition_rotation: trivializations incompatible");
  return polar_rotation(R);
}

TotalPoint chart_transition(const TotalPoint& p, ChartId target) {
  if (p.chart == target) return p;
  if (!chart_admits(target, p.base.x))
    throw ChartDomainError("chart_transition: target chart excludes base point");
  const Mat3 R = transition_rotation(p.chart, target, p.base);
  return TotalPoint{target, p.base, R * p.fiber};
}

Tangent tangent_transition(const TotalPoint& p, const Tangent& t, ChartId target) {
  if (p.chart == target) return t;
  const CoframeData cs = chart_coframe(p.chart, p.base);
  const CoframeData ct = chart_coframe(target, p.base);
  const Mat3 R = transition_rotation(p.chart, target, p.base);
  Tangent out;
  out.horiz = ct.frame.transpose() * (cs.frame * t.horiz);
  // b(X) rotates with the trivialization; vert = b(X) - Gamma_target(h)
  const Vec7 lift_src = lift_components(cs, p.fiber, t);
  const Vec3 b_t = R * lift_src.tail<3>();
  const Vec3 a_t = R * p.fiber;
  Vec3 corr = Vec3::Zero();
  if (ct.has_gamma)
    for (int i = 0; i < 3; ++i) {
      double v = 0.0;
      for (int k = 0; k < 4; ++k) {
        double gk = 0.0;
        for (int j = 0; j < 3; ++j) gk += a_t(j) * ct.gamma[j][i][k];
        v += gk * out.horiz(k);
      }
      corr(i) = v;
    }
  out.vert = b_t - corr;
  return out;
}

Vec7 lift_components(const CoframeData& cf, const Vec3& fiber, const Tangent& t) {
  Vec7 w;
  w.head<4>() = t.horiz;
  const auto B = cf.bforms(fiber);
  for (int i = 0; i < 3; ++i)
    w(4 + i) = t.vert(i) + B[i].head<4>().dot(t.horiz);
  return w;
}

AltForm tautological_two_form(const TotalPoint& p) {
  chart_coframe(p.chart, p.base);  // validates the chart
  AltForm tau(2);
  const double a1 = p.fiber(0), a2 = p.fiber(1), a3 = p.fiber(2);
  tau.add({0, 1}, a1); tau.add({2, 3}, -a1);
  tau.add({0, 2}, a2); tau.add({1, 3}, a2);
  tau.add({0, 3}, a3); tau.add({1, 2}, -a3);
  return tau;
}

Vec4 stereo_coords(ChartId chart, const Vec5& x) {
  if (chart == ChartId::StereoPsi) {
    const double d = 1.0 + x(4);
    if (d < kStereoGuard) throw ChartDomainError("stereo_coords: at removed pole");
    return Vec4(x(0) / d, x(1) / d, x(2) / d, x(3) / d);
  }
  if (chart == ChartId::StereoPhi) {
    const double d = 1.0 - x(4);
    if (d < kStereoGuard) throw ChartDomainError("stereo_coords: at removed pole");
    return Vec4(x(0) / d, x(1) / d, x(2) / d, -x(3) / d);
  }
  throw ChartDomainError("stereo_coords: not a stereo chart");
}

Vec5 stereo_point(ChartId chart, const Vec4& u) {
  const double n2 = u.squaredNorm();
  const double D = 1.0 + n2;
  if (chart == ChartId::StereoPsi) {
    Vec5 x;
    x << 2 * u(0), 2 * u(1), 2 * u(2), 2 * u(3), 1.0 - n2;
    return x / D;
  }
  if (chart == ChartId::StereoPhi) {
    Vec5 x;
    x << 2 * u(0), 2 * u(1), 2 * u(2), -2 * u(3), -1.0 + n2;
    return x / D;
  }
  throw ChartDomainError("stereo_point: not a stereo chart");
}

Mat7 lift_coframe_in_coords(ChartId chart, const BasePoint& b, const Vec3& fiber) {
  if (chart != ChartId::StereoPhi && chart != ChartId::StereoPsi)
    throw ChartDomainError("lift_coframe_in_coords: stereo charts only");
  const Vec4 u = stereo_coords(chart, b.x);
  const double cfac = 2.0 / (1.0 + u.squaredNorm());
  const CoframeData cf = chart_coframe(chart, b);
  Mat7 L = Mat7::Zero();
  for (int i = 0; i < 4; ++i) L(i, i) = cfac;
  for (int i = 0; i < 3; ++i) {
    L(4 + i, 4 + i) = 1.0;
    for (int k = 0; k < 4; ++k) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j) v += fiber(j) * cf.gamma[j][i][k];
      L(4 + i, k) = cfac * v;
    }
  }
  return L;
}

}  // namespace coassoc
