#include "impulse_geo/profiles.hpp"

#include "impulse_geo/errors.hpp"
#include "impulse_geo/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace impulse_geo {

WaveProfile::WaveProfile(std::string name, ValueFn f, DifferentialFn df)
    : name_(std::move(name)), f_(std::move(f)), df_(std::move(df)) {
  if (!f_) throw ValidationError("profile '" + name_ + "' has no value function");
}

Vector WaveProfile::differential(const ChartPoint& x) const {
  if (df_) return df_(x);
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Vector out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double step = base * std::max(1.0, std::abs(x[j]));
    ChartPoint xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    out[j] = (f_(xp) - f_(xm)) / (xp[j] - xm[j]);
  }
  return out;
}

WaveProfile zero_profile() {
  WaveProfile p(
      "zero", [](const ChartPoint&) { return 0.0; },
      [](const ChartPoint& x) { return Vector(Vector::Zero(x.size())); });
  p.zero_ = true;
  return p;
}

WaveProfile constant_profile(double value) {
  return WaveProfile(
      "constant", [value](const ChartPoint&) { return value; },
      [](const ChartPoint& x) { return Vector(Vector::Zero(x.size())); });
}

WaveProfile linear_profile(Vector coeffs, double offset) {
  return WaveProfile(
      "linear",
      [coeffs, offset](const ChartPoint& x) { return coeffs.dot(x) + offset; },
      [coeffs](const ChartPoint&) { return coeffs; });
}

WaveProfile quadratic_form_profile(Matrix A, Vector center) {
  const Matrix sym = A + A.transpose();
  return WaveProfile(
      "quadratic-form",
      [A, center](const ChartPoint& x) {
        const Vector d = x - center;
        return d.dot(A * d);
      },
      [sym, center](const ChartPoint& x) { return Vector(sym * (x - center)); });
}

WaveProfile radial_power_profile(double power, Vector center, double scale) {
  return WaveProfile(
      "radial-power",
      [power, center, scale](const ChartPoint& x) {
        return scale * std::pow((x - center).norm(), power);
      },
      [power, center, scale](const ChartPoint& x) {
        const Vector d = x - center;
        const double r = d.norm();
        if (r == 0.0) return Vector(Vector::Zero(x.size()));
        return Vector(scale * power * std::pow(r, power - 2.0) * d);
      });
}

WaveProfile gaussian_bump_profile(double amplitude, Vector center, double width) {
  if (!(width > 0.0)) throw ValidationError("gaussian-bump width must be positive");
  const double inv2w2 = 1.0 / (2.0 * width * width);
  return WaveProfile(
      "gaussian-bump",
      [=](const ChartPoint& x) { return amplitude * std::exp(-(x - center).squaredNorm() * inv2w2); },
      [=](const ChartPoint& x) {
        const Vector d = x - center;
        return Vector(-2.0 * inv2w2 * amplitude * std::exp(-d.squaredNorm() * inv2w2) * d);
      });
}

Vector metric_gradient(const WaveProfile& profile, const Manifold& model, const ChartPoint& x) {
  const Matrix hinv = model.inverse_metric(x);
  return hinv * profile.differential(x);
}

std::string growth_class_name(GrowthClass c) {
  switch (c) {
    case GrowthClass::subquadratic: return "subquadratic";
    case GrowthClass::at_most_quadratic: return "at-most-quadratic";
    case GrowthClass::superquadratic: return "superquadratic";
  }
  return "unknown";
}

GrowthReport classify_growth(const WaveProfile& profile, const Manifold& model,
                             const ChartPoint& xbar, const std::vector<TangentVector>& directions,
                             const std::vector<double>& radii, const GrowthOptions& opts) {
  if (radii.size() < 2) throw ValidationError("classify_growth needs at least two radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw ValidationError("radii must be positive and increasing");
    }
  }
  if (directions.empty()) throw ValidationError("classify_growth needs directions");

  const std::size_t keep = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(opts.fit_fraction * static_cast<double>(radii.size()))));
  const std::size_t first_fit = radii.size() - std::min(keep, radii.size());

  std::vector<double> log_d, log_f, all_d, all_f;
  GrowthReport report;
  constexpr double tiny = std::numeric_limits<double>::min();

  for (std::size_t k = 0; k < directions.size(); ++k) {
    const Vector& w = directions[k].comps;
    const double speed2 = w.size() == model.dim() ? model.norm_squared(xbar, w) : 0.0;
    if (!(speed2 > 0.0)) {
      report.dropped_directions.push_back(k);
      report.drop_reasons.push_back("zero or malformed direction");
      continue;
    }
    const Vector unit = w / std::sqrt(speed2);
    try {
      BackgroundOptions bopts;
      bopts.control.rtol = bopts.control.atol = 1e-10;
      const auto ray = background_geodesic(model, xbar, unit, 0.0, radii.back(), bopts);
      std::vector<double> ds, fs;
      for (double r : radii) {
        const ChartPoint p = ray.state_at(r).x;
        const auto est = distance_estimate(model, xbar, p);
        ds.push_back(est.converged ? est.value : r);
        fs.push_back(profile.value(p));
      }
      for (std::size_t i = 0; i < radii.size(); ++i) {
        all_d.push_back(ds[i]);
        all_f.push_back(fs[i]);
        if (i >= first_fit) {
          log_d.push_back(std::log(ds[i]));
          log_f.push_back(std::log(std::max(std::abs(fs[i]), tiny)));
        }
      }
    } catch (const NumericalError& e) {
      report.dropped_directions.push_back(k);
      report.drop_reasons.push_back(e.what());
    } catch (const DomainError& e) {
      report.dropped_directions.push_back(k);
      report.drop_reasons.push_back(e.what());
    }
  }
  if (log_d.empty()) throw NumericalError("classify_growth: every direction was dropped");

  const auto fit = fit_line<double>(Eigen::Map<const Vector>(log_d.data(), log_d.size()),
                                    Eigen::Map<const Vector>(log_f.data(), log_f.size()));
  report.exponent = fit.slope;
  report.std_error = fit.slope_std_error;
  report.R1 = std::exp(fit.intercept);
  report.samples_used = log_d.size();
  double r2 = 0.0;
  for (std::size_t i = 0; i < all_d.size(); ++i) {
    r2 = std::max(r2, all_f[i] - report.R1 * std::pow(all_d[i], report.exponent));
  }
  report.R2 = r2;
  if (report.exponent < 2.0 - opts.margin) {
    report.classification = GrowthClass::subquadratic;
  } else if (report.exponent > 2.0 + opts.margin) {
    report.classification = GrowthClass::superquadratic;
  } else {
    report.classification = GrowthClass::at_most_quadratic;
  }
  return report;
}

}  // namespace impulse_geo
