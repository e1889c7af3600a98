#include "impulse_geo/errors.hpp"
#include "impulse_geo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace impulse_geo::harness {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Vector center_or_origin(const std::vector<double>& c, int dim, const std::string& what) {
  if (c.empty()) return Vector::Zero(dim);
  if (static_cast<int>(c.size()) != dim) throw ValidationError(what + " must have manifold dimension");
  return to_vector(c);
}

std::string vec_text(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

ImpulsiveOptions integration_options(const ScenarioConfig& c) {
  ImpulsiveOptions o;
  o.control.rtol = c.tolerances.rtol;
  o.control.atol = c.tolerances.atol;
  o.blowup_bound = c.tolerances.blowup_bound;
  return o;
}

struct Scenario {
  Manifold model;
  WaveProfile profile;
  DeltaNet net;
  InitialData data;
};

Scenario build(const ScenarioConfig& c) {
  Manifold model = build_manifold(c.manifold);
  WaveProfile profile = build_profile(c.profile, model.dim());
  DeltaNet net = build_net(c.net);
  InitialData data = build_data(c.data, model);
  return {std::move(model), std::move(profile), std::move(net), std::move(data)};
}

std::vector<double> sample_grid(double a, double b, int count) {
  std::vector<double> u(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) u[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
  u.back() = b;
  return u;
}

std::vector<double> row_of(double u, const Vector& x, const Vector& xdot, double v, double vdot,
                           double energy) {
  std::vector<double> r{u};
  r.insert(r.end(), x.data(), x.data() + x.size());
  r.insert(r.end(), xdot.data(), xdot.data() + xdot.size());
  r.push_back(v);
  r.push_back(vdot);
  r.push_back(energy);
  return r;
}

RunArtifact artifact(ArtifactKind kind, std::string label, const ScenarioConfig& c) {
  RunArtifact a;
  a.kind = kind;
  a.label = std::move(label);
  a.provenance = provenance_of(c);
  return a;
}

std::vector<RunArtifact> run_integrate(const ScenarioConfig& c) {
  if (!c.eps) throw ValidationError("integrate needs eps");
  const auto s = build(c);
  const auto opts = integration_options(c);
  const auto path =
      integrate_impulsive_geodesic(s.model, s.profile, s.net, *c.eps, s.data, c.u_end, opts);
  PathSamples samples;
  samples.dim = s.model.dim();
  for (double u : sample_grid(opts.u_start, c.u_end, c.output.samples)) {
    const auto st = path.state_at(u);
    samples.rows.push_back(row_of(u, st.x, st.xdot, st.v, st.vdot,
                                  lagrangian_energy(st, s.model, s.profile, s.net, *c.eps)));
  }
  auto a = artifact(ArtifactKind::path, "path", c);
  a.payload = std::move(samples);
  return {std::move(a)};
}

std::vector<RunArtifact> run_limit(const ScenarioConfig& c) {
  const auto s = build(c);
  const KinkForm form = kink_form_from_name(c.kink_form);
  BackgroundOptions bopts;
  bopts.control = integration_options(c).control;
  bopts.blowup_bound = c.tolerances.blowup_bound;
  const auto lg = limit_geodesic(s.model, s.profile, s.data, c.u_end, bopts);

  Report r;
  r.entries = {
      {"chart", s.model.name()},
      {"profile", s.profile.name()},
      {"hit_point", vec_text(lg.hit_point)},
      {"hit_velocity", vec_text(lg.hit_velocity)},
      {"velocity_kink", vec_text(lg.velocity_kink)},
      {"jump_coeff", fmt(lg.jump_coeff)},
      {"kink_coeff_published", fmt(lg.kink(KinkForm::published))},
      {"kink_coeff_energy", fmt(lg.kink(KinkForm::energy_consistent))},
      {"kink_form", kink_form_name(form)},
      {"u_end", fmt(c.u_end)},
      {"v_limit_at_u_end", fmt(evaluate_limit(lg, c.u_end, form).v)},
  };
  auto report = artifact(ArtifactKind::report, "limit", c);
  report.payload = std::move(r);

  PathSamples samples;
  samples.dim = s.model.dim();
  for (double u : sample_grid(-1.0, c.u_end, c.output.samples)) {
    const auto st = evaluate_limit(lg, u, form);
    const double vdot = lg.vdot0 + (u > 0.0 ? lg.kink(form) : 0.0);
    samples.rows.push_back(
        row_of(u, st.x, st.xdot, st.v, vdot, s.model.norm_squared(st.x, st.xdot) + 2.0 * vdot));
  }
  auto path = artifact(ArtifactKind::path, "limit_path", c);
  path.payload = std::move(samples);
  return {std::move(report), std::move(path)};
}

std::vector<RunArtifact> run_certify(const ScenarioConfig& c) {
  const auto s = build(c);
  CertificateOptions opts;
  opts.b = c.certificate.b;
  opts.c = c.certificate.c;
  opts.sup.grid = c.certificate.grid;
  CertificatePayload p;
  p.certificate = certify(s.model, s.profile, s.net, s.data.x0, s.data.xdot0, opts);
  const auto& cert = p.certificate;
  p.weissinger_sum = weissinger_series(cert.alpha, cert.lip_F1, cert.lip_F2, cert.K).total();
  p.eps = c.eps;
  auto a = artifact(ArtifactKind::certificate, "certificate", c);
  a.payload = std::move(p);
  return {std::move(a)};
}

std::vector<RunArtifact> run_sweep(const ScenarioConfig& c) {
  if (c.eps_schedule.empty()) throw ValidationError("sweep needs eps_schedule");
  const auto s = build(c);
  StudyOptions opts;
  opts.integration = integration_options(c);
  opts.form = kink_form_from_name(c.kink_form);
  opts.workers = resolve_workers(c);
  const std::vector<double> probes =
      c.probes.empty() ? std::vector<double>{-1.0, -0.5, 0.5, 1.0} : c.probes;
  auto a = artifact(ArtifactKind::table, "table", c);
  a.payload = convergence_study(s.model, s.profile, s.net, s.data, c.eps_schedule, probes, opts);
  return {std::move(a)};
}

std::vector<RunArtifact> run_verify_net(const ScenarioConfig& c) {
  const DeltaNet net = build_net(c.net);
  std::vector<double> schedule = c.eps_schedule;
  if (schedule.empty()) {
    for (int k = 1; k <= 10; ++k) schedule.push_back(std::ldexp(1.0, -k));
  }
  const auto v = verify_strict_delta_net(net, schedule, c.tolerances.net);
  Report r;
  r.entries.emplace_back("net", net.name());
  r.entries.emplace_back("tol", fmt(c.tolerances.net));
  for (const auto& smp : v.samples) {
    char line[256];
    std::snprintf(line, sizeof line, "radius=%.17g integral=%.17g l1=%.17g support_ok=%s%s",
                  smp.support_radius, smp.integral, smp.l1_norm, smp.support_ok ? "true" : "false",
                  smp.indeterminate ? " indeterminate" : "");
    r.entries.emplace_back("eps=" + fmt(smp.eps), line);
  }
  const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  r.entries.emplace_back("support_shrinks", flag(v.support_shrinks));
  r.entries.emplace_back("integral_converges", flag(v.integral_converges));
  r.entries.emplace_back("l1_bounded", flag(v.l1_bounded));
  r.entries.emplace_back("measured_l1_max", fmt(v.measured_l1_max));
  r.entries.emplace_back("declared_l1_bound", fmt(v.declared_l1_bound));
  r.entries.emplace_back("indeterminate", flag(v.indeterminate));
  r.entries.emplace_back("result", v.passed() ? "pass" : "fail");
  r.ok = v.passed();
  auto a = artifact(ArtifactKind::report, "verify_net", c);
  a.payload = std::move(r);
  return {std::move(a)};
}

std::vector<RunArtifact> run_classify_growth(const ScenarioConfig& c) {
  const Manifold model = build_manifold(c.manifold);
  const WaveProfile profile = build_profile(c.profile, model.dim());
  const int n = model.dim();
  const ChartPoint xbar = center_or_origin(c.growth.center, n, "growth.center");
  if (!model.contains(xbar)) throw ValidationError("growth.center lies outside the chart");

  std::vector<TangentVector> dirs;
  if (n == 2) {
    for (int k = 0; k < c.growth.directions; ++k) {
      const double a = 2.0 * std::numbers::pi * k / c.growth.directions;
      dirs.push_back({xbar, (Vector(2) << std::cos(a), std::sin(a)).finished()});
    }
  } else {
    for (int k = 0; k < n; ++k) {
      dirs.push_back({xbar, Vector::Unit(n, k)});
      dirs.push_back({xbar, -Vector::Unit(n, k)});
    }
  }
  std::vector<double> radii = c.growth.radii;
  if (radii.empty()) {
    for (int k = 0; k <= 6; ++k) radii.push_back(std::ldexp(1.0, k));
  }
  const auto g = classify_growth(profile, model, xbar, dirs, radii);
  Report r;
  r.entries = {
      {"chart", model.name()},
      {"profile", profile.name()},
      {"exponent", fmt(g.exponent)},
      {"std_error", fmt(g.std_error)},
      {"R1", fmt(g.R1)},
      {"R2", fmt(g.R2)},
      {"classification", growth_class_name(g.classification)},
      {"samples_used", std::to_string(g.samples_used)},
      {"dropped_directions", std::to_string(g.dropped_directions.size())},
  };
  for (std::size_t i = 0; i < g.dropped_directions.size(); ++i) {
    r.entries.emplace_back("dropped_" + std::to_string(g.dropped_directions[i]), g.drop_reasons[i]);
  }
  auto a = artifact(ArtifactKind::report, "growth", c);
  a.payload = std::move(r);
  return {std::move(a)};
}

}  // namespace

std::vector<std::string> known_manifolds() {
  return {"euclidean", "hyperbolic_half_plane", "sphere_stereographic"};
}

std::vector<std::string> known_profiles() {
  return {"zero", "constant", "linear", "quadratic-form", "radial-power", "gaussian-bump"};
}

std::vector<std::string> known_nets() {
  auto names = builtin_net_names();
  names.push_back("fixed_support");
  names.push_back("double_mass");
  return names;
}

std::vector<std::string> known_subcommands() {
  return {"integrate", "limit", "certify", "sweep", "verify-net", "classify-growth"};
}

Manifold build_manifold(const ManifoldSpec& spec) {
  if (spec.name == "euclidean") return euclidean(spec.dim);
  if (spec.name == "hyperbolic_half_plane") return hyperbolic_half_plane();
  if (spec.name == "sphere_stereographic") return sphere_stereographic();
  throw ValidationError("unknown manifold '" + spec.name + "' (known: " + join(known_manifolds()) + ")");
}

WaveProfile build_profile(const ProfileSpec& spec, int dim) {
  const auto& p = spec;
  if (p.name == "zero") return zero_profile();
  if (p.name == "constant") return constant_profile(p.value);
  if (p.name == "linear") {
    if (static_cast<int>(p.coeffs.size()) != dim) {
      throw ValidationError("linear coeffs must have manifold dimension");
    }
    return linear_profile(to_vector(p.coeffs), p.offset);
  }
  if (p.name == "quadratic-form") {
    if (static_cast<int>(p.matrix.size()) != dim) throw ValidationError("matrix must be dim x dim");
    Matrix A(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (static_cast<int>(p.matrix[static_cast<std::size_t>(i)].size()) != dim) {
        throw ValidationError("matrix must be dim x dim");
      }
      for (int j = 0; j < dim; ++j) {
        A(i, j) = p.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    return quadratic_form_profile(A, center_or_origin(p.center, dim, "center"));
  }
  if (p.name == "radial-power") {
    return radial_power_profile(p.power, center_or_origin(p.center, dim, "center"), p.scale);
  }
  if (p.name == "gaussian-bump") {
    return gaussian_bump_profile(p.amplitude, center_or_origin(p.center, dim, "center"), p.width);
  }
  throw ValidationError("unknown profile '" + p.name + "' (known: " + join(known_profiles()) + ")");
}

DeltaNet build_net(const std::string& name) {
  if (name == "fixed_support") return fixed_support_net();
  if (name == "double_mass") return scaled_net(mollifier_net(), 2.0);
  const auto builtins = builtin_net_names();
  if (std::find(builtins.begin(), builtins.end(), name) == builtins.end()) {
    throw ValidationError("unknown net '" + name + "' (known: " + join(known_nets()) + ")");
  }
  return net_by_name(name);
}

InitialData build_data(const DataSpec& spec, const Manifold& model) {
  const auto n = static_cast<std::size_t>(model.dim());
  if (spec.x0.size() != n || spec.xdot0.size() != n) {
    throw ValidationError("initial data must have manifold dimension");
  }
  InitialData d{to_vector(spec.x0), to_vector(spec.xdot0), spec.v0, spec.vdot0};
  if (!model.contains(d.x0)) throw ValidationError("data.x0 lies outside the " + model.name() + " chart");
  return d;
}

Provenance provenance_of(const ScenarioConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return {hex, tool_version, config.seed};
}

std::string artifact_kind_name(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::path: return "path";
    case ArtifactKind::certificate: return "certificate";
    case ArtifactKind::table: return "table";
    case ArtifactKind::report: return "report";
  }
  return "report";
}

int resolve_workers(const ScenarioConfig& config) {
  int workers = config.workers;
  if (const char* env = std::getenv("IMPULSE_GEO_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || w < 1) {
      throw ValidationError("IMPULSE_GEO_WORKERS must be a positive integer");
    }
    workers = static_cast<int>(w);
  }
  return workers;
}

std::vector<RunArtifact> run(const std::string& subcommand, const ScenarioConfig& config) {
  if (subcommand == "integrate") return run_integrate(config);
  if (subcommand == "limit") return run_limit(config);
  if (subcommand == "certify") return run_certify(config);
  if (subcommand == "sweep") return run_sweep(config);
  if (subcommand == "verify-net") return run_verify_net(config);
  if (subcommand == "classify-growth") return run_classify_growth(config);
  throw ValidationError("unknown subcommand '" + subcommand + "' (known: " +
                        join(known_subcommands()) + ")");
}

}  // namespace impulse_geo::harness
