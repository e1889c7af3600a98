#include "impulse_geo/dynamics.hpp"

#include "impulse_geo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace impulse_geo {

namespace {

Vector background_rhs(const Manifold& model, const Vector& y) {
  const auto n = model.dim();
  Vector dy = Vector::Zero(y.size());
  const ChartPoint x = y.head(n);
  const Vector xdot = y.segment(n, n);
  dy.head(n) = xdot;
  dy.segment(n, n) = geodesic_acceleration(model, x, xdot);
  if (y.size() == 2 * n + 2) dy[2 * n] = y[2 * n + 1];
  return dy;
}

}  // namespace

Vector impulsive_rhs(const GeodesicState& s, const Manifold& model, const WaveProfile& profile,
                     const DeltaNet& net, double eps) {
  const auto n = model.dim();
  Vector dy(2 * n + 2);
  dy.head(n) = s.xdot;
  dy.segment(n, n) = geodesic_acceleration(model, s.x, s.xdot);
  dy[2 * n] = s.vdot;
  dy[2 * n + 1] = 0.0;

  const double d = net.eval(eps, s.u);
  const double dd = net.deriv(eps, s.u);
  if ((d != 0.0 || dd != 0.0) && !profile.is_zero()) {
    const Vector df = profile.differential(s.x);
    dy.segment(n, n) += 0.5 * d * (model.inverse_metric(s.x) * df);
    dy[2 * n + 1] = -df.dot(s.xdot) * d - 0.5 * profile.value(s.x) * dd;
  }
  return dy;
}

double lagrangian_energy(const GeodesicState& s, const Manifold& model, const WaveProfile& profile,
                         const DeltaNet& net, double eps) {
  double g = model.norm_squared(s.x, s.xdot) + 2.0 * s.vdot;
  const double d = net.eval(eps, s.u);
  if (d != 0.0) g += profile.value(s.x) * d;
  return g;
}

GeodesicPath integrate_impulsive_geodesic(const Manifold& model, const WaveProfile& profile,
                                          const DeltaNet& net, double eps, const InitialData& data,
                                          double u_end, const ImpulsiveOptions& opts) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps must lie in (0, 1/2]");
  if (!(u_end >= eps)) throw ValidationError("u_end must be at least eps");
  if (!(opts.u_start <= -eps)) throw ValidationError("data surface must lie before the strip");
  if (data.x0.size() != model.dim() || data.xdot0.size() != model.dim()) {
    throw ValidationError("initial data has wrong dimension");
  }
  if (!model.contains(data.x0)) throw DomainError("initial point outside chart");

  const auto n = model.dim();
  const OdeRhs full = [&](double u, const Vector& y) {
    return impulsive_rhs(GeodesicState::unpack(u, y), model, profile, net, eps);
  };
  const OdeRhs background = [&](double, const Vector& y) { return background_rhs(model, y); };
  const OdeRhs& outside = opts.bypass_outside_strip ? background : full;

  GeodesicState s0{opts.u_start, data.x0, data.xdot0, data.v0, data.vdot0};
  const double e0 = lagrangian_energy(s0, model, profile, net, eps);
  double drift = 0.0;

  const double bound = opts.blowup_bound;
  const StepObserver observer = [&](double u, const Vector& y) -> std::optional<std::string> {
    if (!y.allFinite() || y.head(n).lpNorm<Eigen::Infinity>() > bound ||
        y.segment(n, n).lpNorm<Eigen::Infinity>() > bound) {
      return "blow-up guard";
    }
    if (!model.contains(y.head(n))) return "chart escape";
    const double e = lagrangian_energy(GeodesicState::unpack(u, y), model, profile, net, eps);
    drift = std::max(drift, std::abs(e - e0));
    return std::nullopt;
  };

  GeodesicPath path(n, eps);
  StepStats stats;
  Vector y = s0.pack();
  double u = opts.u_start;

  const auto run = [&](Phase phase, const OdeRhs& rhs, double u1, double h_max) {
    if (u1 <= u) return;
    StepControl control = opts.control;
    control.h_max = std::min(control.h_max, h_max);
    DenseTrajectory traj;
    try {
      traj = integrate_dopri5(rhs, u, y, u1, control, observer, &stats, h_max);
    } catch (const IntegrationFailure& e) {
      throw IntegrationFailure(std::string(e.what()) + " during " + std::string(phase_name(phase)),
                               e.u(), e.state(), std::string(phase_name(phase)));
    }
    y = traj.back().y;
    u = u1;
    path.add_segment(phase, std::move(traj));
  };

  const double strip_cap = net.support_radius(eps) / opts.strip_step_divisor;
  run(Phase::before_strip, outside, -eps, opts.outside_step_max);
  run(Phase::strip, full, eps, strip_cap);
  run(Phase::after_strip, outside, u_end, opts.outside_step_max);

  path.diagnostics().initial_energy = e0;
  path.diagnostics().max_energy_drift = drift;
  path.diagnostics().steps = stats;
  return path;
}

}  // namespace impulse_geo
