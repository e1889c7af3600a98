#include "impulse_geo/delta_net.hpp"

#include "impulse_geo/errors.hpp"
#include "impulse_geo/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace impulse_geo {

namespace {

double raw_bump(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

constexpr double kNarrowScale = 0.1;
constexpr double kAsymCenter = -0.25;
constexpr double kAsymHalfWidth = 0.75;

}  // namespace

double mollifier_normalization() {
  static const double c = [] {
    const auto r = integrate_adaptive(raw_bump, -1.0, 1.0, 1e-15);
    return 1.0 / r.value;
  }();
  return c;
}

double mollifier_bump(double s) { return mollifier_normalization() * raw_bump(s); }

double mollifier_bump_derivative(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return mollifier_bump(s) * (-2.0 * s / (q * q));
}

DeltaNet::DeltaNet(Definition def) : def_(std::move(def)) {
  if (!def_.eval || !def_.support_radius) {
    throw ValidationError("delta net '" + def_.name + "' is missing eval or support_radius");
  }
  if (!(def_.l1_bound > 0.0)) throw ValidationError("delta net L1 bound must be positive");
}

double DeltaNet::eval(double eps, double u) const {
  if (std::abs(u) >= def_.support_radius(eps)) return 0.0;
  return def_.eval(eps, u);
}

double DeltaNet::deriv(double eps, double u) const {
  if (std::abs(u) >= def_.support_radius(eps)) return 0.0;
  if (def_.deriv) return def_.deriv(eps, u);
  // O(step^2 / eps^3) truncation error on top of roundoff ~ 1/(eps * step)
  const double step = 1e-5 * eps;
  return (def_.eval(eps, u + step) - def_.eval(eps, u - step)) / (2.0 * step);
}

DeltaNet mollifier_net() {
  DeltaNet::Definition d;
  d.name = "mollifier";
  d.eval = [](double eps, double u) { return mollifier_bump(u / eps) / eps; };
  d.deriv = [](double eps, double u) { return mollifier_bump_derivative(u / eps) / (eps * eps); };
  d.support_radius = [](double eps) { return eps; };
  d.l1_bound = 1.0;
  return DeltaNet(std::move(d));
}

DeltaNet asymmetric_net() {
  DeltaNet::Definition d;
  d.name = "asymmetric";
  d.eval = [](double eps, double u) {
    const double s = (u / eps - kAsymCenter) / kAsymHalfWidth;
    return mollifier_bump(s) / (kAsymHalfWidth * eps);
  };
  d.deriv = [](double eps, double u) {
    const double s = (u / eps - kAsymCenter) / kAsymHalfWidth;
    const double w = kAsymHalfWidth * eps;
    return mollifier_bump_derivative(s) / (w * w);
  };
  d.support_radius = [](double eps) { return eps; };
  d.l1_bound = 1.0;
  return DeltaNet(std::move(d));
}

DeltaNet signed_net() {
  DeltaNet::Definition d;
  d.name = "signed";
  d.eval = [](double eps, double u) {
    const double s = u / eps;
    const double wide = mollifier_bump(s);
    const double narrow = mollifier_bump(s / kNarrowScale) / kNarrowScale;
    return (1.25 * wide - 0.25 * narrow) / eps;
  };
  d.deriv = [](double eps, double u) {
    const double s = u / eps;
    const double wide = mollifier_bump_derivative(s);
    const double narrow =
        mollifier_bump_derivative(s / kNarrowScale) / (kNarrowScale * kNarrowScale);
    return (1.25 * wide - 0.25 * narrow) / (eps * eps);
  };
  d.support_radius = [](double eps) { return eps; };
  d.l1_bound = 1.5;
  return DeltaNet(std::move(d));
}

DeltaNet scaled_net(const DeltaNet& base, double factor) {
  DeltaNet::Definition d;
  d.name = base.name() + "-scaled";
  d.eval = [base, factor](double eps, double u) { return factor * base.eval(eps, u); };
  d.deriv = [base, factor](double eps, double u) { return factor * base.deriv(eps, u); };
  d.support_radius = [base](double eps) { return base.support_radius(eps); };
  d.l1_bound = std::abs(factor) * base.l1_bound();
  return DeltaNet(std::move(d));
}

DeltaNet fixed_support_net() {
  DeltaNet::Definition d;
  d.name = "fixed-support";
  d.eval = [](double, double u) { return mollifier_bump(u); };
  d.deriv = [](double, double u) { return mollifier_bump_derivative(u); };
  d.support_radius = [](double) { return 1.0; };
  d.l1_bound = 1.0;
  return DeltaNet(std::move(d));
}

std::vector<std::string> builtin_net_names() { return {"mollifier", "asymmetric", "signed"}; }

DeltaNet net_by_name(const std::string& name) {
  if (name == "mollifier") return mollifier_net();
  if (name == "asymmetric") return asymmetric_net();
  if (name == "signed") return signed_net();
  std::string known;
  for (const auto& n : builtin_net_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown net '" + name + "' (known: " + known + ")");
}

namespace {

// Sign changes located on a 4096-cell scan and refined by bisection.
std::vector<std::pair<double, double>> sign_constant_pieces(const std::function<double(double)>& f,
                                                            double a, double b) {
  constexpr int cells = 4096;
  std::vector<double> cuts{a};
  double u_prev = a;
  double f_prev = f(a);
  for (int i = 1; i <= cells; ++i) {
    const double u = a + (b - a) * i / cells;
    const double fu = f(u);
    if ((f_prev < 0.0 && fu > 0.0) || (f_prev > 0.0 && fu < 0.0)) {
      double lo = u_prev, hi = u;
      const bool lo_neg = f_prev < 0.0;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * (b - a); ++k) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) < 0.0) == lo_neg ? lo : hi) = mid;
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    if (fu != 0.0) {
      u_prev = u;
      f_prev = fu;
    }
  }
  cuts.push_back(b);
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = 1; i < cuts.size(); ++i) pieces.emplace_back(cuts[i - 1], cuts[i]);
  return pieces;
}

}  // namespace

NetVerification verify_strict_delta_net(const DeltaNet& net, const std::vector<double>& eps_schedule,
                                        double tol) {
  if (eps_schedule.empty()) throw ValidationError("empty eps schedule");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) throw ValidationError("eps schedule must be positive");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
      throw ValidationError("eps schedule must be strictly decreasing");
    }
  }

  NetVerification report;
  report.declared_l1_bound = net.l1_bound();
  report.support_shrinks = true;
  report.l1_bounded = true;

  for (double eps : eps_schedule) {
    NetSample s;
    s.eps = eps;
    s.support_radius = net.support_radius(eps);
    const double r = s.support_radius;

    // Look for mass just outside the declared support.
    bool leak = false;
    for (int k = 0; k <= 20 && !leak; ++k) {
      const double u = r * (1.0 + 0.05 * k) + 1e-12;
      leak = net.raw_eval(eps, u) != 0.0 || net.raw_eval(eps, -u) != 0.0;
    }
    s.support_ok = r <= eps * (1.0 + 1e-12) && !leak;

    const auto f = [&](double u) { return net.eval(eps, u); };
    const auto q = integrate_adaptive(f, -r, r, 1e-12);
    s.integral = q.value;
    s.quadrature_error = q.error;
    s.indeterminate = !q.converged;
    // |delta| is only Lipschitz at sign changes; integrate delta itself
    // between them and add the absolute values
    s.l1_norm = 0.0;
    for (const auto& [a, b] : sign_constant_pieces(f, -r, r)) {
      const auto piece = integrate_adaptive(f, a, b, 1e-12);
      s.l1_norm += std::abs(piece.value);
      s.quadrature_error = std::max(s.quadrature_error, piece.error);
      s.indeterminate = s.indeterminate || !piece.converged;
    }

    report.support_shrinks = report.support_shrinks && s.support_ok;
    report.measured_l1_max = std::max(report.measured_l1_max, s.l1_norm);
    report.indeterminate = report.indeterminate || s.indeterminate;
    report.samples.push_back(s);
  }

  report.l1_bounded = report.measured_l1_max <= net.l1_bound() + tol;

  bool trend_ok = true;
  for (std::size_t i = 1; i < report.samples.size(); ++i) {
    const double prev = std::abs(report.samples[i - 1].integral - 1.0);
    const double cur = std::abs(report.samples[i].integral - 1.0);
    trend_ok = trend_ok && cur <= prev + tol;
  }
  report.integral_converges =
      trend_ok && std::abs(report.samples.back().integral - 1.0) <= tol;
  return report;
}

}  // namespace impulse_geo
