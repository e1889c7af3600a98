#pragma once

#include "impulse_geo/types.hpp"

#include <functional>

namespace impulse_geo {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (7/15) with embedded error estimate. `converged`
// means the estimate is at most abs_tol * max(1, integral of |f|).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-12);

// Running integral int_{t_0}^{t_i} g on a uniform grid of spacing h, one column
// per grid point. Even nodes use composite Simpson, odd nodes add a
// quadratic-interpolant panel to the preceding Simpson sum.
Matrix cumulative_simpson(const Matrix& samples, double h);

}  // namespace impulse_geo
