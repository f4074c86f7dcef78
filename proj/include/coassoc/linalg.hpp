#pragma once

#include <Eigen/Dense>

namespace coassoc {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat54 = Eigen::Matrix<double, 5, 4>;

// Nearest rotation in Frobenius norm (polar factor, det forced to +1).
inline Mat3 polar_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

// Rank with a relative cutoff plus an absolute noise floor (columns built by
// finite differences carry ~1e-13 noise even when they vanish identically).
inline int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8,
                          double abs_floor = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > std::max(rel_tol * s(0), abs_floor)) ++r;
  return r;
}

}  // namespace coassoc
