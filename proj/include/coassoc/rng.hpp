#pragma once

#include <cstdint>
#include <random>

#include "coassoc/linalg.hpp"

namespace coassoc {

// Deterministic sampling helper; all randomness in the project flows through
// this so that a fixed seed reproduces runs byte for byte.
class Rng {
 public:
  explicit Rng(uint64_t seed) : g_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(g_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec3 normal3() { return Vec3(normal(), normal(), normal()); }

  Vec5 sphere5(double max_abs_x5 = 1.0) {
    while (true) {
      Vec5 x;
      for (int i = 0; i < 5; ++i) x(i) = normal();
      const double n = x.norm();
      if (n < 1e-12) continue;
      x /= n;
      if (std::abs(x(4)) <= max_abs_x5) return x;
    }
  }

  Mat3 so3() {
    Mat3 a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = normal();
    Eigen::HouseholderQR<Mat3> qr(a);
    Mat3 q = qr.householderQ();
    if (q.determinant() < 0.0) q.col(2) = -q.col(2);
    return q;
  }

 private:
  std::mt19937_64 g_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace coassoc
