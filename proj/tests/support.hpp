#pragma once

#include "impulse_geo/existence.hpp"
#include "impulse_geo/limits.hpp"
#include "impulse_geo/quadrature.hpp"

#include <random>
#include <string>
#include <vector>

namespace igt {

using namespace impulse_geo;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// One manifold with data at u = -1 and profile centers near x(0).
struct ChartCase {
  Manifold model;
  InitialData data;
  Vector bump_center;
  Vector quad_center;
};

inline std::vector<ChartCase> chart_cases() {
  return {
      {euclidean(2), {vec({0.0, 0.0}), vec({1.0, 0.0}), 0.0, 0.0}, vec({1.0, 0.2}), vec({0.0, 0.0})},
      {hyperbolic_half_plane(), {vec({-0.5, 1.0}), vec({0.5, 0.1}), 0.0, 0.0}, vec({0.0, 1.2}),
       vec({0.0, 1.0})},
      {sphere_stereographic(), {vec({-0.5, 0.0}), vec({0.5, 0.1}), 0.0, 0.0}, vec({0.0, 0.1}),
       vec({0.0, 0.0})},
  };
}

inline std::vector<WaveProfile> scenario_profiles(const ChartCase& c) {
  Matrix A(2, 2);
  A << 1.0, 0.2, 0.2, 0.5;
  return {linear_profile(vec({1.0, 0.0}), 0.0), quadratic_form_profile(A, c.quad_center),
          gaussian_bump_profile(1.0, c.bump_center, 0.5)};
}

inline std::vector<DeltaNet> scenario_nets() { return {mollifier_net(), asymmetric_net()}; }

struct Scenario {
  std::string label;
  Manifold model;
  WaveProfile profile;
  DeltaNet net;
  InitialData data;
};

// 3 manifolds x 3 profiles x 2 nets
inline std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  for (const auto& c : chart_cases()) {
    for (const auto& p : scenario_profiles(c)) {
      for (const auto& n : scenario_nets()) {
        out.push_back({c.model.name() + "/" + p.name() + "/" + n.name(), c.model, p, n, c.data});
      }
    }
  }
  return out;
}

// x^1 for f = x^1 on flat R^2, data (0,0), (1,0) at u = -1:
//   x^1(u) = u + 1 + 1/2 int_{-eps}^{u} (u - r) delta_eps(r) dr
inline double linear_x1(const DeltaNet& net, double eps, double u) {
  if (u <= -eps) return u + 1.0;
  const double hi = std::min(u, net.support_radius(eps));
  const auto q = integrate_adaptive([&](double r) { return (u - r) * net.eval(eps, r); },
                                    -net.support_radius(eps), hi, 1e-12);
  return u + 1.0 + 0.5 * q.value;
}

inline double linear_xdot1(const DeltaNet& net, double eps, double u) {
  if (u <= -eps) return 1.0;
  const double hi = std::min(u, net.support_radius(eps));
  const auto q = integrate_adaptive([&](double r) { return net.eval(eps, r); },
                                    -net.support_radius(eps), hi, 1e-12);
  return 1.0 + 0.5 * q.value;
}

inline std::vector<double> dyadic(int k_from, int k_to) {
  std::vector<double> out;
  for (int k = k_from; k <= k_to; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

}  // namespace igt
