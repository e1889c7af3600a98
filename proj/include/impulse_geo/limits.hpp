#pragma once

#include "impulse_geo/dynamics.hpp"

#include <string>
#include <vector>

namespace impulse_geo {

// Which slope change of v the limit uses past the shock.
//   published:         kink = -(xdot^j(0) + 1/4 grad f^j) d_j f
//   energy_consistent: half of that, the value forced by conservation of
//                      g(gamma', gamma') across the strip
enum class KinkForm { published, energy_consistent };

std::string kink_form_name(KinkForm form);
KinkForm kink_form_from_name(const std::string& name);

// The broken eps -> 0 geodesic: background flow to u = 0, then background
// flow from the same point with velocity xdot(0) + 1/2 grad f(x(0)); v is
// affine with a jump and a kink at u = 0.
struct LimitGeodesic {
  GeodesicPath base;       // on [-1, 0]
  GeodesicPath refracted;  // on [0, u_end]
  double v0 = 0.0;
  double vdot0 = 0.0;
  ChartPoint hit_point;    // x(0)
  Vector hit_velocity;     // xdot(0-)
  Vector velocity_kink;    // 1/2 grad f(x(0))
  double jump_coeff = 0.0; // -1/2 f(x(0))
  double kink_coeff = 0.0; // published form

  double kink(KinkForm form) const {
    return form == KinkForm::published ? kink_coeff : 0.5 * kink_coeff;
  }
};

struct LimitState {
  double u = 0.0;
  ChartPoint x;
  Vector xdot;
  double v = 0.0;
};

LimitGeodesic limit_geodesic(const Manifold& model, const WaveProfile& profile,
                             const InitialData& data, double u_end = 1.0,
                             const BackgroundOptions& opts = {});

// u <= 0 uses the base piece (left continuity at the shock).
LimitState evaluate_limit(const LimitGeodesic& lg, double u, KinkForm form = KinkForm::published);

// sup over 201 points u in [-1, 1] of |x_eps(eps u) - x(0)| in chart norm.
double inner_scale_error(const Manifold& model, const WaveProfile& profile, const DeltaNet& net,
                         const InitialData& data, double eps, const ImpulsiveOptions& opts = {});

struct ConvergenceRow {
  double eps = 0.0;
  double err_x = 0.0;
  double err_xdot = 0.0;
  double err_v = 0.0;
  double order_so_far = 0.0;  // err_x order over the rows so far; NaN on the first row
  bool failed = false;
  std::string failure;
};

struct ConvergenceTable {
  std::string chart;
  KinkForm form = KinkForm::published;
  std::vector<ConvergenceRow> rows;
  // least-squares slopes of log err vs log eps on the smallest half of the schedule
  double order_x = 0.0;
  double order_xdot = 0.0;
  double order_v = 0.0;
  bool monotone_x = true;
  bool monotone_xdot = true;
  bool monotone_v = true;
};

struct StudyOptions {
  ImpulsiveOptions integration{};
  KinkForm form = KinkForm::published;
  int workers = 1;
};

// Probes must avoid (-max eps, max eps) and lie in [-1, inf).
ConvergenceTable convergence_study(const Manifold& model, const WaveProfile& profile,
                                   const DeltaNet& net, const InitialData& data,
                                   const std::vector<double>& eps_schedule,
                                   const std::vector<double>& u_probes,
                                   const StudyOptions& opts = {});

// Slope of log(err) against log(eps) over the given rows; errors are floored at 1e-300.
double fitted_order(const std::vector<double>& eps, const std::vector<double>& err);

}  // namespace impulse_geo
