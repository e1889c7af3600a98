#include "impulse_geo/limits.hpp"

#include "impulse_geo/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace impulse_geo {

std::string kink_form_name(KinkForm form) {
  return form == KinkForm::published ? "published" : "energy";
}

KinkForm kink_form_from_name(const std::string& name) {
  if (name == "published") return KinkForm::published;
  if (name == "energy" || name == "energy_consistent") return KinkForm::energy_consistent;
  throw ValidationError("unknown kink form '" + name + "' (known: published, energy)");
}

LimitGeodesic limit_geodesic(const Manifold& model, const WaveProfile& profile,
                             const InitialData& data, double u_end, const BackgroundOptions& opts) {
  if (!(u_end > 0.0)) throw ValidationError("limit_geodesic needs u_end > 0");
  LimitGeodesic lg;
  try {
    lg.base = background_geodesic(model, data.x0, data.xdot0, -1.0, 0.0, opts);
  } catch (const IntegrationFailure& e) {
    throw DomainError(std::string("background geodesic does not reach u = 0: ") + e.what());
  }
  const auto hit = lg.base.state_at(0.0);
  lg.hit_point = hit.x;
  lg.hit_velocity = hit.xdot;
  lg.v0 = data.v0;
  lg.vdot0 = data.vdot0;

  const Vector grad = metric_gradient(profile, model, hit.x);
  const Vector df = profile.differential(hit.x);
  lg.velocity_kink = 0.5 * grad;
  lg.jump_coeff = -0.5 * profile.value(hit.x);
  lg.kink_coeff = -(hit.xdot + 0.25 * grad).dot(df);

  lg.refracted = background_geodesic(model, hit.x, hit.xdot + lg.velocity_kink, 0.0, u_end, opts);
  return lg;
}

LimitState evaluate_limit(const LimitGeodesic& lg, double u, KinkForm form) {
  LimitState s;
  s.u = u;
  const auto piece = u <= 0.0 ? lg.base.state_at(u) : lg.refracted.state_at(u);
  s.x = piece.x;
  s.xdot = piece.xdot;
  s.v = lg.v0 + lg.vdot0 * (1.0 + u);
  if (u > 0.0) s.v += lg.jump_coeff + lg.kink(form) * u;
  return s;
}

double inner_scale_error(const Manifold& model, const WaveProfile& profile, const DeltaNet& net,
                         const InitialData& data, double eps, const ImpulsiveOptions& opts) {
  BackgroundOptions bopts;
  bopts.control = opts.control;
  const ChartPoint x_hit =
      background_geodesic(model, data.x0, data.xdot0, opts.u_start, 0.0, bopts).state_at(0.0).x;
  const auto path = integrate_impulsive_geodesic(model, profile, net, eps, data, eps, opts);
  double err = 0.0;
  constexpr int points = 201;
  for (int i = 0; i < points; ++i) {
    const double s = -1.0 + 2.0 * i / (points - 1);
    err = std::max(err, (path.state_at(eps * s).x - x_hit).norm());
  }
  return err;
}

double fitted_order(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  Vector lx(eps.size()), ly(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    lx[static_cast<Eigen::Index>(i)] = std::log(eps[i]);
    ly[static_cast<Eigen::Index>(i)] = std::log(std::max(err[i], 1e-300));
  }
  return fit_line<double>(lx, ly).slope;
}

namespace {

// Rows [lo, hi] restricted to the successful ones.
double order_over(const std::vector<ConvergenceRow>& rows, std::size_t lo, std::size_t hi,
                  double ConvergenceRow::*column) {
  std::vector<double> e, r;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (rows[i].failed) continue;
    e.push_back(rows[i].eps);
    r.push_back(rows[i].*column);
  }
  return fitted_order(e, r);
}

bool monotone(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*column) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.failed) continue;
    if (row.*column > prev) return false;
    prev = row.*column;
  }
  return true;
}

}  // namespace

ConvergenceTable convergence_study(const Manifold& model, const WaveProfile& profile,
                                   const DeltaNet& net, const InitialData& data,
                                   const std::vector<double>& eps_schedule,
                                   const std::vector<double>& u_probes, const StudyOptions& opts) {
  if (eps_schedule.empty()) throw ValidationError("convergence_study: empty eps schedule");
  if (u_probes.empty()) throw ValidationError("convergence_study: no probes");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    const double e = eps_schedule[i];
    if (!(e > 0.0 && e <= 0.5)) throw ValidationError("eps values must lie in (0, 1/2]");
    if (i > 0 && !(e < eps_schedule[i - 1])) {
      throw ValidationError("eps schedule must be strictly decreasing");
    }
  }
  const double eps_max = eps_schedule.front();
  double u_end = eps_max;
  for (double u : u_probes) {
    if (std::abs(u) < eps_max || u < opts.integration.u_start) {
      throw ValidationError("probe u = " + std::to_string(u) +
                            " inside the largest strip or before the data surface");
    }
    u_end = std::max(u_end, u);
  }

  BackgroundOptions bopts;
  bopts.control = opts.integration.control;
  const auto lg = limit_geodesic(model, profile, data, u_end, bopts);
  std::vector<LimitState> reference;
  for (double u : u_probes) reference.push_back(evaluate_limit(lg, u, opts.form));

  ConvergenceTable table;
  table.chart = model.name();
  table.form = opts.form;
  table.rows.resize(eps_schedule.size());

  const auto compute_row = [&](std::size_t i) {
    ConvergenceRow row;
    row.eps = eps_schedule[i];
    try {
      const auto path = integrate_impulsive_geodesic(model, profile, net, row.eps, data, u_end,
                                                     opts.integration);
      for (std::size_t p = 0; p < u_probes.size(); ++p) {
        const auto s = path.state_at(u_probes[p]);
        row.err_x = std::max(row.err_x, (s.x - reference[p].x).norm());
        row.err_xdot = std::max(row.err_xdot, (s.xdot - reference[p].xdot).norm());
        row.err_v = std::max(row.err_v, std::abs(s.v - reference[p].v));
      }
    } catch (const NumericalError& e) {
      row.failed = true;
      row.failure = e.what();
    } catch (const DomainError& e) {
      row.failed = true;
      row.failure = e.what();
    }
    table.rows[i] = row;
  };

  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(eps_schedule.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) compute_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < eps_schedule.size(); i = next++) compute_row(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  const std::size_t count = table.rows.size();
  for (std::size_t i = 0; i < count; ++i) {
    table.rows[i].order_so_far =
        i == 0 ? std::numeric_limits<double>::quiet_NaN()
               : order_over(table.rows, i / 2, i, &ConvergenceRow::err_x);
  }
  const std::size_t tail = std::max<std::size_t>(2, (count + 1) / 2);
  const std::size_t first = count > tail ? count - tail : 0;
  table.order_x = order_over(table.rows, first, count - 1, &ConvergenceRow::err_x);
  table.order_xdot = order_over(table.rows, first, count - 1, &ConvergenceRow::err_xdot);
  table.order_v = order_over(table.rows, first, count - 1, &ConvergenceRow::err_v);
  table.monotone_x = monotone(table.rows, &ConvergenceRow::err_x);
  table.monotone_xdot = monotone(table.rows, &ConvergenceRow::err_xdot);
  table.monotone_v = monotone(table.rows, &ConvergenceRow::err_v);
  return table;
}

}  // namespace impulse_geo
