#pragma once

#include <array>
#include <functional>

#include "coassoc/charts.hpp"
#include "coassoc/forms.hpp"

namespace coassoc {

struct G2Params {
  double lambda = 1.0;
  // lambda = 0 is allowed only for cone-limit comparisons away from the zero
  // section (r > r_min).
  bool cone_mode = false;
  static constexpr double kConeRMin = 1e-6;
};

void validate_params(const G2Params&, double r2);
double s_lambda(const G2Params&, double r2);

// The flat model 3-form, its dual and the standard volume on R^7.
const AltForm& phi0();
const AltForm& phi0_star();
double phi0_eval(const Vec7& v1, const Vec7& v2, const Vec7& v3);

// Recovers the metric determined by a 3-form via
// -6 g(v,w) vol = i(v)phi ^ i(w)phi ^ phi, with vol = vol_coeff * e^{1..7}.
// Throws DegenerateFormError when the recovered form is not positive definite.
Mat7 metric_from_phi(const AltForm& phi3, double vol_coeff);
double metric_from_phi(const AltForm& phi3, double vol_coeff, const Vec7& v1, const Vec7& v2);

// The Bryant-Salamon 3-form at p, on the horizontal-lift adapted frame.
AltForm phi_lambda(const TotalPoint&, const G2Params&);

// Diagonal of g_lambda on the lift frame: (2 s^2 x4, s^-2 x3).
std::array<double, 7> metric_diag(const G2Params&, double r2);

double g_lambda(const TotalPoint&, const G2Params&, const Tangent&, const Tangent&);

// Hodge star of a lift-frame form with the g_lambda metric; orientation is the
// adapted frame order (e_1..e_4, da_1..da_3).
AltForm hodge_star(const TotalPoint&, const G2Params&, const AltForm&);

// A form field evaluated anywhere near a point, returning lift-frame components.
using FormField = std::function<AltForm(const TotalPoint&)>;

// Central-difference exterior derivative in the 7 stereo chart coordinates.
// Returns lift-frame components at p. p must lie in (or transit to) a stereo chart.
AltForm exterior_derivative_fd(const FormField&, const TotalPoint& p, double h);

// max(|d phi|, |d *phi|) in lift-frame components; applies a (h, h/2)
// Richardson pass when the plain h-estimate exceeds `tol`.
double torsion_residual(const TotalPoint&, const G2Params&, double h, double tol);

// Scale-invariant coassociativity residual of the span of four tangents.
double coassoc_residual(const TotalPoint&, const G2Params&, const std::array<Tangent, 4>&);

}  // namespace coassoc
