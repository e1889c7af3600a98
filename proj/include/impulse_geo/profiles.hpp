#pragma once

#include "impulse_geo/geometry.hpp"
#include "impulse_geo/types.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace impulse_geo {

// The wave profile f on N together with its coordinate differential df.
class WaveProfile {
 public:
  using ValueFn = std::function<double(const ChartPoint&)>;
  using DifferentialFn = std::function<Vector(const ChartPoint&)>;

  WaveProfile(std::string name, ValueFn f, DifferentialFn df = {});

  const std::string& name() const { return name_; }
  bool analytic_grad() const { return static_cast<bool>(df_); }

  double value(const ChartPoint& x) const { return f_(x); }
  // Coordinate partials d f / d x^j; central differences when no df was given.
  Vector differential(const ChartPoint& x) const;

  bool is_zero() const { return zero_; }

 private:
  friend WaveProfile zero_profile();
  std::string name_;
  ValueFn f_;
  DifferentialFn df_;
  bool zero_ = false;
};

WaveProfile zero_profile();
WaveProfile constant_profile(double value);
// f = a . x + offset
WaveProfile linear_profile(Vector coeffs, double offset = 0.0);
// f = (x - c)^T A (x - c)
WaveProfile quadratic_form_profile(Matrix A, Vector center);
// f = scale * |x - c|^power (chart norm)
WaveProfile radial_power_profile(double power, Vector center, double scale = 1.0);
// f = amplitude * exp(-|x - c|^2 / (2 width^2))
WaveProfile gaussian_bump_profile(double amplitude, Vector center, double width);

// (grad_x f)^k = h^km d_m f
Vector metric_gradient(const WaveProfile& profile, const Manifold& model, const ChartPoint& x);

enum class GrowthClass { subquadratic, at_most_quadratic, superquadratic };
std::string growth_class_name(GrowthClass c);

struct GrowthOptions {
  double margin = 0.1;
  // fraction of the (largest) radii used in the fit; at least two are kept
  double fit_fraction = 0.5;
};

// Least-squares fit of log|f| = log R1 + p log d(x, xbar) on radial samples,
// plus R2 making f <= R1 d^p + R2 on every sample taken.
struct GrowthReport {
  double exponent = 0.0;
  double std_error = 0.0;
  double R1 = 0.0;
  double R2 = 0.0;
  GrowthClass classification = GrowthClass::subquadratic;
  std::size_t samples_used = 0;
  std::vector<std::size_t> dropped_directions;
  std::vector<std::string> drop_reasons;
};

GrowthReport classify_growth(const WaveProfile& profile, const Manifold& model,
                             const ChartPoint& xbar, const std::vector<TangentVector>& directions,
                             const std::vector<double>& radii, const GrowthOptions& opts = {});

// Slope, intercept and slope standard error of an ordinary least-squares line.
template <typename Scalar>
struct LineFit {
  Scalar slope{};
  Scalar intercept{};
  Scalar slope_std_error{};
};

template <typename Scalar>
LineFit<Scalar> fit_line(const VectorX<Scalar>& xs, const VectorX<Scalar>& ys) {
  const auto m = xs.size();
  const Scalar xm = xs.mean();
  const Scalar ym = ys.mean();
  const VectorX<Scalar> dx = xs.array() - xm;
  const VectorX<Scalar> dy = ys.array() - ym;
  const Scalar sxx = dx.squaredNorm();
  LineFit<Scalar> fit;
  fit.slope = sxx > Scalar(0) ? dx.dot(dy) / sxx : Scalar(0);
  fit.intercept = ym - fit.slope * xm;
  if (m > 2 && sxx > Scalar(0)) {
    const Scalar ssr = (dy - fit.slope * dx).squaredNorm();
    fit.slope_std_error = std::sqrt(ssr / Scalar(m - 2) / sxx);
  }
  return fit;
}

}  // namespace impulse_geo
