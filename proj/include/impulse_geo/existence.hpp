#pragma once

#include "impulse_geo/delta_net.hpp"
#include "impulse_geo/errors.hpp"
#include "impulse_geo/geometry.hpp"
#include "impulse_geo/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace impulse_geo {

// Sampled sup norms and Lipschitz constants of
//   F1(y, z)^k = -Gamma^k_ij(y) z^i z^j   on I3 = I1 x I2,
//   F2(y)^k    = 1/2 h^km(y) d_m f(y)     on I1,
// with I1 = {|y - x0| <= b} and I2 = {|z - xdot0| <= c + K ||F2||} in chart norm.
struct SupNorms {
  double norm_F1 = 0.0;
  double norm_F2 = 0.0;
  double lip_F1 = 0.0;
  double lip_F2 = 0.0;
  double i2_radius = 0.0;
  int grid = 0;
};

struct SupNormOptions {
  int grid = 9;  // points per axis, >= 9
  // sampled max m over samples with minimum m0 is reported as
  // m + (safety - 1) (m - m0); constant samples are taken as exact
  double safety = 1.1;
};

SupNorms estimate_sup_norms(const Manifold& model, const WaveProfile& profile, const ChartPoint& x0,
                            const Vector& xdot0, double b, double c_seed, double K,
                            const SupNormOptions& opts = {});

template <typename Scalar>
struct AlphaBound {
  Scalar alpha{};
  Scalar eps0{};
};

// alpha = min(1, b / (|xdot0| + ||F1|| + K ||F2||), c / ||F1||) with x/0 = +inf,
// eps0 = alpha / 2.
template <typename Scalar>
AlphaBound<Scalar> alpha_bound(Scalar speed, Scalar b, Scalar c, Scalar norm_F1, Scalar norm_F2,
                               Scalar K) {
  if (!(b > Scalar(0) && c > Scalar(0) && K > Scalar(0))) {
    throw ValidationError("alpha_bound: b, c and K must be positive");
  }
  if (speed < Scalar(0) || norm_F1 < Scalar(0) || norm_F2 < Scalar(0)) {
    throw ValidationError("alpha_bound: norms must be nonnegative");
  }
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Scalar denom = speed + norm_F1 + K * norm_F2;
  const Scalar b_ratio = denom > Scalar(0) ? b / denom : inf;
  const Scalar c_ratio = norm_F1 > Scalar(0) ? c / norm_F1 : inf;
  const Scalar alpha = std::min({Scalar(1), b_ratio, c_ratio});
  return {alpha, alpha / Scalar(2)};
}

// a_n = 4 max(Lip F1, K Lip F2) alpha^(2n-2) / (2n-2)!, n >= 2
template <typename Scalar>
Scalar weissinger_coefficient(int n, Scalar alpha, Scalar lip_F1, Scalar lip_F2, Scalar K) {
  if (n < 2) throw ValidationError("weissinger_coefficient: n must be >= 2");
  const Scalar lead = Scalar(4) * std::max(lip_F1, K * lip_F2);
  if (lead == Scalar(0) || alpha == Scalar(0)) return Scalar(0);
  const int k = 2 * n - 2;
  using std::exp;
  using std::lgamma;
  using std::log;
  return lead * exp(Scalar(k) * log(alpha) - lgamma(Scalar(k + 1)));
}

struct WeissingerSeries {
  std::vector<double> partial_sums;  // partial_sums[i] = sum_{n=2}^{i+2} a_n
  // first n at which the partial sum stops changing by more than 1e-12
  // (relative to max(1, sum)); -1 if it never does within the computed terms
  int stabilized_at = -1;
  double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

WeissingerSeries weissinger_series(double alpha, double lip_F1, double lip_F2, double K,
                                   int n_max = 60);

struct ExistenceCertificate {
  std::string chart;
  ChartPoint x_center;
  Vector xdot_center;
  double b = 1.0;
  double c = 1.0;
  double i1_radius = 0.0;
  double i2_radius = 0.0;
  double norm_F1 = 0.0;
  double norm_F2 = 0.0;
  double lip_F1 = 0.0;
  double lip_F2 = 0.0;
  double K = 1.0;
  double alpha = 0.0;
  double eps0 = 0.0;
  int grid = 0;

  bool in_I1(const ChartPoint& x, double slack = 1e-9) const;
  bool in_I2(const Vector& xdot, double slack = 1e-9) const;
};

struct CertificateOptions {
  double b = 1.0;
  double c = 1.0;
  SupNormOptions sup{};
  // halve b (at most 40 times) while I1 does not fit in the chart, instead
  // of failing with DomainError
  bool shrink_b_to_chart = false;
};

// Certificate for the strip problem with data (x_center, xdot_center) at u = -eps.
ExistenceCertificate certify(const Manifold& model, const WaveProfile& profile, const DeltaNet& net,
                             const ChartPoint& x_center, const Vector& xdot_center,
                             const CertificateOptions& opts = {});

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 200;
  int grid_intervals = 2000;  // even, >= 2000
  bool refine = true;         // double the grid until the fixed point moves <= tol
  int max_grid_intervals = 2000 * 128;
  // when set, iterates are checked against I1 x I2 and the a-priori
  // Weissinger iteration bound is reported
  std::optional<ExistenceCertificate> certificate;
};

struct PicardResult {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> xdot;
  int applications = 0;           // operator evaluations on the final grid
  int corrective_iterations = 0;  // applications that moved the iterate by more than tol
  double last_change = 0.0;
  int weissinger_bound = -1;      // a-priori iteration count, -1 when unknown
  int grid_intervals = 0;
  double refinement_shift = 0.0;
};

// Fixed point of
//   A(x)(t) = x0 + xdot0 (t + eps) + int int F1(x, xdot) + int int F2(x) delta_eps
// on J = [-eps, alpha - eps], iterated from the straight line until the
// C1 grid norm of the update is <= tol.
PicardResult picard_solve(const Manifold& model, const WaveProfile& profile, const DeltaNet& net,
                          double eps, const ChartPoint& x_start, const Vector& xdot_start,
                          double alpha, const PicardOptions& opts = {});

}  // namespace impulse_geo
