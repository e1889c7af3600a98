#pragma once

#include "impulse_geo/delta_net.hpp"
#include "impulse_geo/geometry.hpp"
#include "impulse_geo/path.hpp"
#include "impulse_geo/profiles.hpp"

namespace impulse_geo {

// Data posed on the surface u = u_start (by default u = -1, before the shock).
struct InitialData {
  ChartPoint x0;
  Vector xdot0;
  double v0 = 0.0;
  double vdot0 = 0.0;
};

struct ImpulsiveOptions {
  StepControl control{};
  double blowup_bound = 1e8;
  // inside [-eps, eps] the step is capped at support_radius(eps) / strip_step_divisor
  double strip_step_divisor = 50.0;
  // step cap outside the strip; keeps the cubic Hermite dense output near tolerance
  double outside_step_max = 1e-2;
  // false: evaluate the (vanishing) delta terms outside the strip as well
  bool bypass_outside_strip = true;
  double u_start = -1.0;
};

// (xdot, xddot, vdot, vddot) packed like GeodesicState::pack():
//   xddot^k = -Gamma^k_ij xdot^i xdot^j + 1/2 (grad f)^k delta_eps(u)
//   vddot   = -(d_j f) xdot^j delta_eps(u) - 1/2 f delta_eps'(u)
Vector impulsive_rhs(const GeodesicState& state, const Manifold& model, const WaveProfile& profile,
                     const DeltaNet& net, double eps);

// The pasted three-phase geodesic: background flow up to -eps, the full
// system across the strip, background flow to u_end. Step boundaries are
// forced at +-eps. Throws IntegrationFailure (with phase) on blow-up or
// chart escape.
GeodesicPath integrate_impulsive_geodesic(const Manifold& model, const WaveProfile& profile,
                                          const DeltaNet& net, double eps, const InitialData& data,
                                          double u_end, const ImpulsiveOptions& opts = {});

// g(gamma', gamma') = h_ij xdot^i xdot^j + 2 vdot + f(x) delta_eps(u), with u' = 1.
double lagrangian_energy(const GeodesicState& state, const Manifold& model,
                         const WaveProfile& profile, const DeltaNet& net, double eps);

}  // namespace impulse_geo
