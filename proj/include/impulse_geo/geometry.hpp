#pragma once

#include "impulse_geo/ode.hpp"
#include "impulse_geo/types.hpp"

#include <functional>
#include <string>

namespace impulse_geo {

class GeodesicPath;

// A Riemannian manifold (N, h) described in a single chart. Immutable after
// construction; every query is a pure function of the chart point.
class Manifold {
 public:
  using MetricFn = std::function<Matrix(const ChartPoint&)>;
  using ChristoffelFn = std::function<Christoffel(const ChartPoint&)>;
  using DomainFn = std::function<bool(const ChartPoint&)>;
  using DistanceFn = std::function<double(const ChartPoint&, const ChartPoint&)>;

  struct Definition {
    std::string name;
    int dim = 0;
    MetricFn metric;
    MetricFn inverse_metric;   // optional, defaults to a dense inverse
    ChristoffelFn christoffel; // optional, defaults to central differences
    DomainFn domain;           // optional, defaults to all of R^n
    DistanceFn distance;       // optional closed form
    bool completeness_declared = true;
  };

  explicit Manifold(Definition def);

  const std::string& name() const { return def_.name; }
  int dim() const { return def_.dim; }
  bool completeness_declared() const { return def_.completeness_declared; }
  bool has_analytic_christoffel() const { return static_cast<bool>(def_.christoffel); }
  bool has_closed_form_distance() const { return static_cast<bool>(def_.distance); }

  bool contains(const ChartPoint& x) const;

  // All of these throw DomainError outside the chart.
  Matrix metric(const ChartPoint& x) const;
  Matrix inverse_metric(const ChartPoint& x) const;
  Christoffel christoffel(const ChartPoint& x) const;

  double norm_squared(const ChartPoint& x, const Vector& v) const {
    return v.dot(metric(x) * v);
  }

  const Definition& definition() const { return def_; }

 private:
  void require_inside(const ChartPoint& x) const;

  Definition def_;
};

// Built-in models.
Manifold euclidean(int n);
// h = (dx1^2 + dx2^2) / (x2)^2 on x2 > 0
Manifold hyperbolic_half_plane();
// Unit sphere minus its north pole, h = 4 |dx|^2 / (1 + |x|^2)^2
Manifold sphere_stereographic();
// Christoffels by central differences of the metric callback.
Manifold user_defined(std::string name, int dim, Manifold::MetricFn metric,
                      Manifold::DomainFn domain = {}, bool completeness_declared = true);

// Levi-Civita symbols from a metric callback by central differences of h,
// step cbrt(machine eps) scaled by max(1, |x^l|).
Christoffel finite_difference_christoffel(const Manifold::MetricFn& metric, const ChartPoint& x);

Christoffel christoffel_at(const Manifold& model, const ChartPoint& x);

// Geodesic acceleration -Gamma^k_ij xdot^i xdot^j.
Vector geodesic_acceleration(const Manifold& model, const ChartPoint& x, const Vector& xdot);

struct BackgroundOptions {
  StepControl control{};
  double blowup_bound = 1e8;
  // step cap; keeps the cubic Hermite dense output near tolerance
  double step_max = 1e-2;
};

// Unperturbed geodesic D_xdot xdot = 0 on [u_start, u_end]; the v components
// of the returned path are zero.
GeodesicPath background_geodesic(const Manifold& model, const ChartPoint& x0, const Vector& xdot0,
                                 double u_start, double u_end, const BackgroundOptions& opts = {});

struct DistanceEstimate {
  double value = 0.0;
  bool exact = false;
  // false when shooting did not converge; value is then only the best
  // chord estimate found and is treated as a lower bound by callers
  bool converged = true;
};

DistanceEstimate distance_estimate(const Manifold& model, const ChartPoint& x,
                                   const ChartPoint& xbar);

}  // namespace impulse_geo
