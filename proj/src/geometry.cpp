#include "impulse_geo/geometry.hpp"

#include "impulse_geo/errors.hpp"
#include "impulse_geo/path.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace impulse_geo {

namespace {

std::string describe(const ChartPoint& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

// Gamma for h = exp(2 phi) * identity, given grad phi.
Christoffel conformal_christoffel(const Vector& dphi) {
  const int n = static_cast<int>(dphi.size());
  Christoffel g(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double val = 0.0;
        if (k == i) val += dphi[j];
        if (k == j) val += dphi[i];
        if (i == j) val -= dphi[k];
        g(k, i, j) = val;
      }
    }
  }
  return g;
}

}  // namespace

Manifold::Manifold(Definition def) : def_(std::move(def)) {
  if (def_.dim <= 0) throw ValidationError("manifold dimension must be positive");
  if (!def_.metric) throw ValidationError("manifold '" + def_.name + "' has no metric");
}

bool Manifold::contains(const ChartPoint& x) const {
  if (x.size() != def_.dim || !x.allFinite()) return false;
  return !def_.domain || def_.domain(x);
}

void Manifold::require_inside(const ChartPoint& x) const {
  if (!contains(x)) {
    throw DomainError("point " + describe(x) + " outside chart of '" + def_.name + "'");
  }
}

Matrix Manifold::metric(const ChartPoint& x) const {
  require_inside(x);
  return def_.metric(x);
}

Matrix Manifold::inverse_metric(const ChartPoint& x) const {
  require_inside(x);
  if (def_.inverse_metric) return def_.inverse_metric(x);
  return def_.metric(x).ldlt().solve(Matrix::Identity(def_.dim, def_.dim));
}

Christoffel Manifold::christoffel(const ChartPoint& x) const {
  require_inside(x);
  if (def_.christoffel) return def_.christoffel(x);
  return finite_difference_christoffel(def_.metric, x);
}

Christoffel finite_difference_christoffel(const Manifold::MetricFn& metric, const ChartPoint& x) {
  const int n = static_cast<int>(x.size());
  static const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());

  // dh[l](i, j) = d_l h_ij
  std::vector<Matrix> dh(n);
  for (int l = 0; l < n; ++l) {
    const double step = base_step * std::max(1.0, std::abs(x[l]));
    ChartPoint xp = x, xm = x;
    xp[l] += step;
    xm[l] -= step;
    dh[l] = (metric(xp) - metric(xm)) / (xp[l] - xm[l]);
  }
  const Matrix hinv = metric(x).ldlt().solve(Matrix::Identity(n, n));

  Christoffel g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vector lowered(n);  // Gamma_{m ij}
      for (int m = 0; m < n; ++m) {
        lowered[m] = 0.5 * (dh[i](m, j) + dh[j](m, i) - dh[m](i, j));
      }
      const Vector raised = hinv * lowered;
      for (int k = 0; k < n; ++k) {
        g(k, i, j) = raised[k];
        g(k, j, i) = raised[k];
      }
    }
  }
  return g;
}

Manifold euclidean(int n) {
  Manifold::Definition d;
  d.name = "euclidean";
  d.dim = n;
  d.metric = [n](const ChartPoint&) { return Matrix::Identity(n, n); };
  d.inverse_metric = d.metric;
  d.christoffel = [n](const ChartPoint&) { return Christoffel(n); };
  d.distance = [](const ChartPoint& a, const ChartPoint& b) { return (a - b).norm(); };
  return Manifold(std::move(d));
}

Manifold hyperbolic_half_plane() {
  Manifold::Definition d;
  d.name = "hyperbolic-half-plane";
  d.dim = 2;
  d.metric = [](const ChartPoint& x) {
    return Matrix(Matrix::Identity(2, 2) / (x[1] * x[1]));
  };
  d.inverse_metric = [](const ChartPoint& x) {
    return Matrix(Matrix::Identity(2, 2) * (x[1] * x[1]));
  };
  // phi = -log(x2)
  d.christoffel = [](const ChartPoint& x) {
    return conformal_christoffel(Vector{{0.0, -1.0 / x[1]}});
  };
  d.domain = [](const ChartPoint& x) { return x[1] > 0.0; };
  d.distance = [](const ChartPoint& a, const ChartPoint& b) {
    const double arg = 1.0 + (a - b).squaredNorm() / (2.0 * a[1] * b[1]);
    return std::acosh(arg);
  };
  return Manifold(std::move(d));
}

Manifold sphere_stereographic() {
  Manifold::Definition d;
  d.name = "sphere-stereographic";
  d.dim = 2;
  d.metric = [](const ChartPoint& x) {
    const double s = 2.0 / (1.0 + x.squaredNorm());
    return Matrix(Matrix::Identity(2, 2) * (s * s));
  };
  d.inverse_metric = [](const ChartPoint& x) {
    const double s = (1.0 + x.squaredNorm()) / 2.0;
    return Matrix(Matrix::Identity(2, 2) * (s * s));
  };
  // phi = log 2 - log(1 + |x|^2)
  d.christoffel = [](const ChartPoint& x) {
    return conformal_christoffel(Vector(-2.0 * x / (1.0 + x.squaredNorm())));
  };
  d.distance = [](const ChartPoint& a, const ChartPoint& b) {
    const auto lift = [](const ChartPoint& x) -> Eigen::Vector3d {
      const double r2 = x.squaredNorm();
      return Eigen::Vector3d(2 * x[0], 2 * x[1], r2 - 1.0) / (1.0 + r2);
    };
    return 2.0 * std::asin(std::min(1.0, 0.5 * (lift(a) - lift(b)).norm()));
  };
  return Manifold(std::move(d));
}

Manifold user_defined(std::string name, int dim, Manifold::MetricFn metric,
                      Manifold::DomainFn domain, bool completeness_declared) {
  Manifold::Definition d;
  d.name = std::move(name);
  d.dim = dim;
  d.metric = std::move(metric);
  d.domain = std::move(domain);
  d.completeness_declared = completeness_declared;
  return Manifold(std::move(d));
}

Christoffel christoffel_at(const Manifold& model, const ChartPoint& x) {
  return model.christoffel(x);
}

Vector geodesic_acceleration(const Manifold& model, const ChartPoint& x, const Vector& xdot) {
  return -model.christoffel(x).contract(xdot);
}

GeodesicPath background_geodesic(const Manifold& model, const ChartPoint& x0, const Vector& xdot0,
                                 double u_start, double u_end, const BackgroundOptions& opts) {
  if (!(u_start < u_end)) throw ValidationError("background_geodesic needs u_start < u_end");
  if (!model.contains(x0)) throw DomainError("initial point outside chart");
  if (xdot0.size() != model.dim()) throw ValidationError("velocity has wrong dimension");

  const auto n = model.dim();
  const OdeRhs rhs = [&model, n](double, const Vector& y) {
    Vector dy = Vector::Zero(y.size());
    const ChartPoint x = y.head(n);
    const Vector xdot = y.segment(n, n);
    dy.head(n) = xdot;
    dy.segment(n, n) = geodesic_acceleration(model, x, xdot);
    return dy;
  };
  const double bound = opts.blowup_bound;
  const StepObserver guard = [&model, n, bound](double, const Vector& y) -> std::optional<std::string> {
    if (y.head(n).lpNorm<Eigen::Infinity>() > bound ||
        y.segment(n, n).lpNorm<Eigen::Infinity>() > bound) {
      return "blow-up guard";
    }
    if (!model.contains(y.head(n))) return "chart escape";
    return std::nullopt;
  };

  StepControl control = opts.control;
  control.h_max = std::min(control.h_max, opts.step_max);

  GeodesicState s0{u_start, x0, xdot0, 0.0, 0.0};
  GeodesicPath path(n, 0.0);
  StepStats stats;
  try {
    path.add_segment(Phase::before_strip,
                     integrate_dopri5(rhs, u_start, s0.pack(), u_end, control, guard, &stats));
  } catch (const IntegrationFailure& e) {
    throw IntegrationFailure(e.what(), e.u(), e.state(), "background");
  }
  path.diagnostics().steps = stats;
  const double e0 = model.norm_squared(x0, xdot0);
  path.diagnostics().initial_energy = e0;
  double drift = 0.0;
  for (const auto& node : path.segments().front().trajectory.nodes()) {
    const auto s = GeodesicState::unpack(node.u, node.y);
    drift = std::max(drift, std::abs(model.norm_squared(s.x, s.xdot) - e0));
  }
  path.diagnostics().max_energy_drift = drift;
  return path;
}

namespace {

DistanceEstimate shoot_distance(const Manifold& model, const ChartPoint& x, const ChartPoint& xbar) {
  const auto n = model.dim();
  BackgroundOptions opts;
  opts.control.rtol = opts.control.atol = 1e-11;
  const auto endpoint = [&](const Vector& w) {
    return background_geodesic(model, x, w, 0.0, 1.0, opts).state_at(1.0).x;
  };

  Vector w = xbar - x;
  double best = std::numeric_limits<double>::infinity();
  Vector best_w = w;
  for (int iter = 0; iter < 40; ++iter) {
    Vector residual;
    try {
      residual = endpoint(w) - xbar;
    } catch (const NumericalError&) {
      w = 0.5 * (w + best_w);
      continue;
    } catch (const DomainError&) {
      w = 0.5 * (w + best_w);
      continue;
    }
    const double r = residual.norm();
    if (r < best) {
      best = r;
      best_w = w;
    }
    if (r < 1e-10 * (1.0 + xbar.norm())) {
      return {std::sqrt(model.norm_squared(x, w)), false, true};
    }
    Matrix jac(n, n);
    try {
      for (int j = 0; j < n; ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(w[j]));
        Vector wp = w, wm = w;
        wp[j] += step;
        wm[j] -= step;
        jac.col(j) = (endpoint(wp) - endpoint(wm)) / (2 * step);
      }
    } catch (const std::exception&) {
      break;
    }
    w -= jac.fullPivLu().solve(residual);
  }
  return {std::sqrt(model.norm_squared(x, best_w)), false, false};
}

}  // namespace

DistanceEstimate distance_estimate(const Manifold& model, const ChartPoint& x,
                                   const ChartPoint& xbar) {
  if (!model.contains(x) || !model.contains(xbar)) {
    throw DomainError("distance_estimate: point outside chart");
  }
  if (x == xbar) return {0.0, true, true};
  if (model.has_closed_form_distance()) {
    return {model.definition().distance(x, xbar), true, true};
  }
  return shoot_distance(model, x, xbar);
}

}  // namespace impulse_geo
