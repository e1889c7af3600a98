#include "impulse_geo/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace impulse_geo {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol) {
  if (a == b) return {0.0, 0.0, true};
  double error = 0.0;
  double l1 = 0.0;
  // boost's termination test is relative to the L1 norm; mapping onto [-1, 1]
  // keeps it independent of the interval width
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto g = [&](double s) { return half * f(mid + half * s); };
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, -1.0, 1.0, 20, abs_tol, &error, &l1);
  l1 = std::abs(l1);
  return {value, error, std::isfinite(value) && error <= abs_tol * std::max(1.0, l1)};
}

Matrix cumulative_simpson(const Matrix& samples, double h) {
  const Eigen::Index m = samples.cols();
  Matrix out = Matrix::Zero(samples.rows(), m);
  if (m < 2) return out;
  if (m == 2) {
    out.col(1) = 0.5 * h * (samples.col(0) + samples.col(1));
    return out;
  }
  for (Eigen::Index i = 2; i < m; i += 2) {
    out.col(i) = out.col(i - 2) +
                 (h / 3.0) * (samples.col(i - 2) + 4.0 * samples.col(i - 1) + samples.col(i));
  }
  for (Eigen::Index i = 1; i < m; i += 2) {
    if (i + 1 < m) {
      out.col(i) = out.col(i - 1) + (h / 12.0) * (5.0 * samples.col(i - 1) +
                                                  8.0 * samples.col(i) - samples.col(i + 1));
    } else {
      out.col(i) = out.col(i - 1) + (h / 12.0) * (-samples.col(i - 2) +
                                                  8.0 * samples.col(i - 1) + 5.0 * samples.col(i));
    }
  }
  return out;
}

}  // namespace impulse_geo
