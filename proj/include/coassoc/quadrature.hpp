#pragma once

#include <functional>

namespace coassoc {

// Adaptive Gauss-Kronrod (G7, K15) with interval bisection. `abs_tol` is the
// target absolute error for the whole interval; a > b integrates with sign.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-13);

}  // namespace coassoc
