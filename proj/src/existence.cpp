#include "impulse_geo/existence.hpp"

#include "impulse_geo/quadrature.hpp"

#include <cmath>
#include <limits>

namespace impulse_geo {

namespace {

// Cube grid over [-1, 1]^n scaled to the ball; points outside are pulled
// radially onto the sphere so the boundary is well covered.
std::vector<Vector> ball_samples(const Vector& center, double radius, int grid) {
  const auto n = center.size();
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid);
  std::vector<Vector> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vector p(n);
    std::size_t rem = idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = rem % static_cast<std::size_t>(grid);
      rem /= static_cast<std::size_t>(grid);
      p[i] = -1.0 + 2.0 * static_cast<double>(k) / (grid - 1);
    }
    const double r = p.norm();
    if (r > 1.0) p /= r;
    out.push_back(center + radius * p);
  }
  return out;
}

struct Extent {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  void add(double v) {
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  double inflated(double safety) const {
    if (!(hi > 0.0)) return 0.0;
    return hi + (safety - 1.0) * (hi - lo);
  }
};

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Vector half_gradient(const Manifold& model, const WaveProfile& profile, const ChartPoint& y) {
  return 0.5 * metric_gradient(profile, model, y);
}

}  // namespace

SupNorms estimate_sup_norms(const Manifold& model, const WaveProfile& profile, const ChartPoint& x0,
                            const Vector& xdot0, double b, double c_seed, double K,
                            const SupNormOptions& opts) {
  if (opts.grid < 9) throw ValidationError("sup-norm grid needs at least 9 points per axis");
  if (!(b > 0.0 && c_seed > 0.0 && K > 0.0)) throw ValidationError("b, c and K must be positive");
  const auto n = model.dim();
  if (x0.size() != n || xdot0.size() != n) throw ValidationError("data has wrong dimension");

  const auto ys = ball_samples(x0, b, opts.grid);
  for (const auto& y : ys) {
    if (!model.contains(y)) throw DomainError("ball I1 escapes the chart of '" + model.name() + "'");
  }

  SupNorms out;
  out.grid = opts.grid;
  Extent f2, lip2;
  try {
    for (const auto& y : ys) {
      f2.add(half_gradient(model, profile, y).norm());
      Matrix jac(n, n);
      for (int j = 0; j < n; ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(y[j]));
        ChartPoint yp = y, ym = y;
        yp[j] += step;
        ym[j] -= step;
        jac.col(j) = (half_gradient(model, profile, yp) - half_gradient(model, profile, ym)) /
                     (yp[j] - ym[j]);
      }
      lip2.add(spectral_norm(jac));
    }
  } catch (const DomainError&) {
    throw DomainError("ball I1 escapes the chart of '" + model.name() + "'");
  }
  out.norm_F2 = f2.inflated(opts.safety);
  out.lip_F2 = lip2.inflated(opts.safety);
  out.i2_radius = c_seed + K * out.norm_F2;

  const auto zs = ball_samples(xdot0, out.i2_radius, opts.grid);
  static const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
  Extent f1, lip1;
  try {
    for (const auto& y : ys) {
      const Christoffel gamma = model.christoffel(y);
      std::vector<Christoffel> dgamma;  // d_l Gamma
      dgamma.reserve(n);
      for (int l = 0; l < n; ++l) {
        const double step = base_step * std::max(1.0, std::abs(y[l]));
        ChartPoint yp = y, ym = y;
        yp[l] += step;
        ym[l] -= step;
        const Christoffel gp = model.christoffel(yp);
        const Christoffel gm = model.christoffel(ym);
        Christoffel d(n);
        for (int k = 0; k < n; ++k) d.block(k) = (gp.block(k) - gm.block(k)) / (yp[l] - ym[l]);
        dgamma.push_back(std::move(d));
      }
      for (const auto& z : zs) {
        f1.add(gamma.contract(z).norm());
        Matrix jz(n, n), jy(n, n);
        for (int k = 0; k < n; ++k) {
          jz.row(k) = -2.0 * (gamma.block(k) * z).transpose();
          for (int l = 0; l < n; ++l) jy(k, l) = -z.dot(dgamma[l].block(k) * z);
        }
        lip1.add(std::max(spectral_norm(jy), spectral_norm(jz)));
      }
    }
  } catch (const DomainError&) {
    throw DomainError("ball I1 escapes the chart of '" + model.name() + "'");
  }
  out.norm_F1 = f1.inflated(opts.safety);
  out.lip_F1 = lip1.inflated(opts.safety);
  return out;
}

WeissingerSeries weissinger_series(double alpha, double lip_F1, double lip_F2, double K, int n_max) {
  WeissingerSeries s;
  double sum = 0.0;
  for (int n = 2; n <= n_max; ++n) {
    const double a = weissinger_coefficient<double>(n, alpha, lip_F1, lip_F2, K);
    const double next = sum + a;
    if (s.stabilized_at < 0 && n > 2 && std::abs(next - sum) <= 1e-12 * std::max(1.0, next)) {
      s.stabilized_at = n;
    }
    sum = next;
    s.partial_sums.push_back(sum);
  }
  return s;
}

bool ExistenceCertificate::in_I1(const ChartPoint& x, double slack) const {
  return (x - x_center).norm() <= i1_radius * (1.0 + slack) + slack;
}

bool ExistenceCertificate::in_I2(const Vector& xdot, double slack) const {
  return (xdot - xdot_center).norm() <= i2_radius * (1.0 + slack) + slack;
}

ExistenceCertificate certify(const Manifold& model, const WaveProfile& profile, const DeltaNet& net,
                             const ChartPoint& x_center, const Vector& xdot_center,
                             const CertificateOptions& opts) {
  const double K = net.l1_bound();
  double b = opts.b;
  SupNorms norms;
  for (int attempt = 0;; ++attempt) {
    try {
      norms = estimate_sup_norms(model, profile, x_center, xdot_center, b, opts.c, K, opts.sup);
      break;
    } catch (const DomainError&) {
      if (!opts.shrink_b_to_chart || attempt >= 40) throw;
      b *= 0.5;
    }
  }
  ExistenceCertificate cert;
  cert.chart = model.name();
  cert.x_center = x_center;
  cert.xdot_center = xdot_center;
  cert.b = b;
  cert.c = opts.c;
  cert.i1_radius = b;
  cert.i2_radius = norms.i2_radius;
  cert.norm_F1 = norms.norm_F1;
  cert.norm_F2 = norms.norm_F2;
  cert.lip_F1 = norms.lip_F1;
  cert.lip_F2 = norms.lip_F2;
  cert.K = K;
  cert.grid = norms.grid;
  const auto ab =
      alpha_bound<double>(xdot_center.norm(), b, opts.c, norms.norm_F1, norms.norm_F2, K);
  cert.alpha = ab.alpha;
  cert.eps0 = ab.eps0;
  return cert;
}

namespace {

struct PicardGridSolve {
  Matrix x;
  Matrix xdot;
  int applications = 0;
  int corrective = 0;
  double last_change = 0.0;
  double first_change = 0.0;
};

PicardGridSolve picard_on_grid(const Manifold& model, const WaveProfile& profile,
                               const DeltaNet& net, double eps, const ChartPoint& x0,
                               const Vector& xdot0, double alpha, int intervals,
                               const PicardOptions& opts) {
  const auto n = model.dim();
  const int m = intervals + 1;
  const double h = alpha / intervals;

  Vector t(m);
  Vector delta(m);
  for (int i = 0; i < m; ++i) {
    t[i] = -eps + h * i;
    delta[i] = net.eval(eps, t[i]);
  }

  PicardGridSolve s;
  s.x.resize(n, m);
  s.xdot.resize(n, m);
  for (int i = 0; i < m; ++i) {
    s.x.col(i) = x0 + xdot0 * (t[i] + eps);
    s.xdot.col(i) = xdot0;
  }

  Matrix g(n, m);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    for (int i = 0; i < m; ++i) {
      const ChartPoint xi = s.x.col(i);
      const Vector vi = s.xdot.col(i);
      Vector gi = -model.christoffel(xi).contract(vi);
      if (delta[i] != 0.0 && !profile.is_zero()) {
        gi += 0.5 * delta[i] * metric_gradient(profile, model, xi);
      }
      g.col(i) = gi;
    }
    Matrix xdot_new = cumulative_simpson(g, h);
    xdot_new.colwise() += xdot0;
    Matrix x_new = cumulative_simpson(xdot_new, h);
    x_new.colwise() += x0;

    const double change = (x_new - s.x).colwise().norm().maxCoeff() +
                          (xdot_new - s.xdot).colwise().norm().maxCoeff();
    s.x = std::move(x_new);
    s.xdot = std::move(xdot_new);
    ++s.applications;
    if (iter == 1) s.first_change = change;
    s.last_change = change;

    if (opts.certificate) {
      const auto& cert = *opts.certificate;
      for (int i = 0; i < m; ++i) {
        if (!cert.in_I1(s.x.col(i)) || !cert.in_I2(s.xdot.col(i))) {
          throw CertificateViolation("Picard iterate left I1 x I2 at t = " + std::to_string(t[i]) +
                                     " (b or c too small)");
        }
      }
    }
    if (change <= opts.tol) return s;
    ++s.corrective;
  }
  throw NumericalError("picard_solve: max_iter exceeded, last change " +
                       std::to_string(s.last_change));
}

}  // namespace

PicardResult picard_solve(const Manifold& model, const WaveProfile& profile, const DeltaNet& net,
                          double eps, const ChartPoint& x_start, const Vector& xdot_start,
                          double alpha, const PicardOptions& opts) {
  if (!(eps > 0.0)) throw ValidationError("picard_solve: eps must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("picard_solve: alpha must lie in (0, 1]");
  if (eps > alpha / 2.0 * (1.0 + 1e-12)) {
    throw ValidationError("picard_solve: needs eps <= alpha / 2 to reach u = eps");
  }
  if (!(opts.tol > 0.0)) throw ValidationError("picard_solve: tol must be positive");
  if (opts.grid_intervals < 2000 || opts.grid_intervals % 2 != 0) {
    throw ValidationError("picard_solve: grid needs an even number >= 2000 of intervals");
  }

  int intervals = opts.grid_intervals;
  auto solve = picard_on_grid(model, profile, net, eps, x_start, xdot_start, alpha, intervals, opts);
  double shift = 0.0;
  if (opts.refine) {
    while (2 * intervals <= opts.max_grid_intervals) {
      auto fine = picard_on_grid(model, profile, net, eps, x_start, xdot_start, alpha,
                                 2 * intervals, opts);
      double dx = 0.0, dv = 0.0;
      for (int i = 0; i <= intervals; ++i) {
        dx = std::max(dx, (fine.x.col(2 * i) - solve.x.col(i)).norm());
        dv = std::max(dv, (fine.xdot.col(2 * i) - solve.xdot.col(i)).norm());
      }
      shift = dx + dv;
      solve = std::move(fine);
      intervals *= 2;
      if (shift <= opts.tol) break;
    }
  }

  PicardResult r;
  r.grid_intervals = intervals;
  r.refinement_shift = shift;
  r.applications = solve.applications;
  r.corrective_iterations = solve.corrective;
  r.last_change = solve.last_change;
  const double h = alpha / intervals;
  for (int i = 0; i <= intervals; ++i) {
    r.t.push_back(-eps + h * i);
    r.x.emplace_back(solve.x.col(i));
    r.xdot.emplace_back(solve.xdot.col(i));
  }

  if (opts.certificate) {
    const auto& c = *opts.certificate;
    if (solve.first_change <= opts.tol) {
      r.weissinger_bound = 1;
    } else {
      const auto series = weissinger_series(alpha, c.lip_F1, c.lip_F2, c.K, 200);
      const double total = series.total();
      // ||x* - x_n|| <= (sum_{m > n} a_m) ||x_1 - x_0||
      for (int n = 1; n < 200; ++n) {
        const double before = n == 1 ? 0.0 : series.partial_sums[static_cast<std::size_t>(n - 2)];
        if ((total - before) * solve.first_change <= opts.tol) {
          r.weissinger_bound = n;
          break;
        }
      }
    }
  }
  return r;
}

}  // namespace impulse_geo
