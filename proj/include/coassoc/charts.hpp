#pragma once

#include <array>
#include <string>

#include "coassoc/errors.hpp"
#include "coassoc/forms.hpp"
#include "coassoc/linalg.hpp"

namespace coassoc {

// FRAME: the orthonormal frame of the equatorial chart (invalid near x5 = +-1).
// POLE_*: single-point frames at (0,0,0,0,+-1).
// STEREO_PHI removes x5 = +1, STEREO_PSI removes x5 = -1.
enum class ChartId { Frame, PolePlus, PoleMinus, StereoPhi, StereoPsi };

std::string chart_name(ChartId);
ChartId chart_from_name(const std::string&);

inline constexpr double kChartDelta = 1e-3;   // FRAME chart margin around the poles
inline constexpr double kStereoGuard = 1e-12; // stereo charts exclude their own pole

struct BasePoint {
  Vec5 x;
};

// Checks |x| = 1 within 1e-12 (renormalizes the representation exactly).
BasePoint make_base_point(const Vec5& x);

struct TotalPoint {
  ChartId chart = ChartId::Frame;
  BasePoint base;
  Vec3 fiber = Vec3::Zero();
};

// Tangent components in the chart-adapted frame: `horiz` on e_1..e_4 and
// `vert` the fiber-coordinate velocities on d/da_1..d/da_3.
struct Tangent {
  Vec4 horiz = Vec4::Zero();
  Vec3 vert = Vec3::Zero();
};

struct CoframeData {
  Mat54 frame;                 // columns e_1..e_4 (tangent 5-vectors)
  double gamma[3][3][4] = {};  // gamma_ij(e_k); antisymmetric in (i,j)
  bool has_gamma = true;       // false at pole charts (single-point data)

  // b_i = da_i + sum_j a_j gamma_ji as covectors on the adapted 7-frame.
  std::array<Vec7, 3> bforms(const Vec3& fiber) const;
};

bool chart_admits(ChartId, const Vec5& x);
ChartId preferred_chart(const Vec5& x);

CoframeData frame_at(const BasePoint&);   // FRAME chart; throws ChartDomainError
CoframeData pole_frame(int sign);
CoframeData chart_coframe(ChartId, const BasePoint&);

// Anti-self-dual pattern matrices: omega_i(e_k, e_l) on any adapted frame.
const std::array<Mat4, 3>& asd_patterns();

// Rotation carrying fiber coordinates from `src` to `dst` trivializations at
// the same base point.
Mat3 transition_rotation(ChartId src, ChartId dst, const BasePoint&);

TotalPoint chart_transition(const TotalPoint&, ChartId target);

// Exact transformation of tangent components between charts at the same base
// point: the horizontal part re-expands on the target frame and the fiber
// velocity picks up the connection difference of the two trivializations.
Tangent tangent_transition(const TotalPoint& p, const Tangent&, ChartId target);

// Components of a tangent on the horizontal-lift frame {~e_i, d/da_j}; the
// vertical part becomes b(X).
Vec7 lift_components(const CoframeData&, const Vec3& fiber, const Tangent&);

// tau = sum_i a_i pi* omega_i as a 2-form on the lift frame.
AltForm tautological_two_form(const TotalPoint&);

// Stereographic coordinate maps (STEREO charts only).
Vec4 stereo_coords(ChartId, const Vec5& x);
Vec5 stereo_point(ChartId, const Vec4& u);

// Lift coframe {pi* e^i, b_i} expressed in the chart coordinate differentials
// {du_k, da_j}: row m gives the m-th lift covector. STEREO charts only.
Mat7 lift_coframe_in_coords(ChartId, const BasePoint&, const Vec3& fiber);

}  // namespace coassoc
