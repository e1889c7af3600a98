#include "impulse_geo/errors.hpp"
#include "impulse_geo/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace impulse_geo::harness {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
}

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      std::string known;
      for (const auto& a : allowed) known += (known.empty() ? "" : ", ") + a;
      throw ValidationError("unknown key '" + key + "' in " + where + " (allowed: " + known + ")");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void require_positive(double x, const std::string& what) {
  if (!(x > 0.0)) throw ValidationError(what + " must be positive");
}

void check_eps(double e, const std::string& what) {
  if (!(e > 0.0 && e <= 0.5)) throw ValidationError(what + " must lie in (0, 1/2]");
}

const std::set<std::string>& profile_keys(const std::string& name) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"zero", {"name"}},
      {"constant", {"name", "value"}},
      {"linear", {"name", "coeffs", "offset"}},
      {"quadratic-form", {"name", "matrix", "center"}},
      {"radial-power", {"name", "power", "center", "scale"}},
      {"gaussian-bump", {"name", "amplitude", "center", "width"}},
  };
  const auto it = keys.find(name);
  if (it == keys.end()) {
    std::string known;
    for (const auto& p : known_profiles()) known += (known.empty() ? "" : ", ") + p;
    throw ValidationError("unknown profile '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

ManifoldSpec parse_manifold(const json& j) {
  require_object(j, "manifold");
  reject_unknown(j, "manifold", {"name", "dim"});
  ManifoldSpec m;
  if (!j.contains("name")) throw ValidationError("manifold.name is required");
  read(j, "name", m.name);
  const auto names = known_manifolds();
  if (std::find(names.begin(), names.end(), m.name) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown manifold '" + m.name + "' (known: " + known + ")");
  }
  read(j, "dim", m.dim);
  if (m.name != "euclidean" && m.dim != 2) throw ValidationError(m.name + " has dimension 2");
  if (m.dim < 1) throw ValidationError("manifold.dim must be >= 1");
  return m;
}

ProfileSpec parse_profile(const json& j) {
  require_object(j, "profile");
  ProfileSpec p;
  if (!j.contains("name")) throw ValidationError("profile.name is required");
  read(j, "name", p.name);
  reject_unknown(j, "profile " + p.name, profile_keys(p.name));
  read(j, "value", p.value);
  read(j, "coeffs", p.coeffs);
  read(j, "offset", p.offset);
  read(j, "matrix", p.matrix);
  read(j, "center", p.center);
  read(j, "power", p.power);
  read(j, "scale", p.scale);
  read(j, "amplitude", p.amplitude);
  read(j, "width", p.width);
  if (p.name == "linear" && p.coeffs.empty()) throw ValidationError("linear profile needs coeffs");
  if (p.name == "quadratic-form" && p.matrix.empty()) {
    throw ValidationError("quadratic-form profile needs matrix");
  }
  if (p.name == "radial-power" && !(p.power > 0.0)) throw ValidationError("power must be positive");
  if (p.name == "gaussian-bump") require_positive(p.width, "width");
  return p;
}

json profile_json(const ProfileSpec& p) {
  json j;
  j["name"] = p.name;
  const auto& keys = profile_keys(p.name);
  if (keys.count("value")) j["value"] = p.value;
  if (keys.count("coeffs")) j["coeffs"] = p.coeffs;
  if (keys.count("offset")) j["offset"] = p.offset;
  if (keys.count("matrix")) j["matrix"] = p.matrix;
  if (keys.count("center")) j["center"] = p.center;
  if (keys.count("power")) j["power"] = p.power;
  if (keys.count("scale")) j["scale"] = p.scale;
  if (keys.count("amplitude")) j["amplitude"] = p.amplitude;
  if (keys.count("width")) j["width"] = p.width;
  return j;
}

ScenarioConfig parse_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "config",
                 {"schema_version", "manifold", "profile", "net", "data", "eps", "eps_schedule",
                  "u_end", "tolerances", "certificate", "probes", "growth", "kink_form", "seed",
                  "workers", "output"});
  ScenarioConfig c;
  if (!j.contains("schema_version")) throw ValidationError("schema_version is required");
  read(j, "schema_version", c.schema_version);
  if (c.schema_version != schema_version) {
    throw ValidationError("unsupported schema_version " + std::to_string(c.schema_version));
  }
  if (j.contains("manifold")) c.manifold = parse_manifold(j.at("manifold"));
  if (j.contains("profile")) c.profile = parse_profile(j.at("profile"));
  read(j, "net", c.net);
  const auto nets = known_nets();
  if (std::find(nets.begin(), nets.end(), c.net) == nets.end()) {
    std::string known;
    for (const auto& n : nets) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown net '" + c.net + "' (known: " + known + ")");
  }

  if (!j.contains("data")) throw ValidationError("data is required");
  {
    const json& d = j.at("data");
    require_object(d, "data");
    reject_unknown(d, "data", {"x0", "xdot0", "v0", "vdot0"});
    if (!d.contains("x0") || !d.contains("xdot0")) throw ValidationError("data needs x0 and xdot0");
    read(d, "x0", c.data.x0);
    read(d, "xdot0", c.data.xdot0);
    read(d, "v0", c.data.v0);
    read(d, "vdot0", c.data.vdot0);
    const auto n = static_cast<std::size_t>(c.manifold.dim);
    if (c.data.x0.size() != n || c.data.xdot0.size() != n) {
      throw ValidationError("data.x0 and data.xdot0 must have manifold dimension");
    }
  }

  if (j.contains("eps")) {
    c.eps = j.at("eps").get<double>();
    check_eps(*c.eps, "eps");
  }
  read(j, "eps_schedule", c.eps_schedule);
  for (std::size_t i = 0; i < c.eps_schedule.size(); ++i) {
    check_eps(c.eps_schedule[i], "eps_schedule entries");
    if (i > 0 && !(c.eps_schedule[i] < c.eps_schedule[i - 1])) {
      throw ValidationError("eps_schedule must be strictly decreasing");
    }
  }
  read(j, "u_end", c.u_end);
  require_positive(c.u_end, "u_end");

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require_object(t, "tolerances");
    reject_unknown(t, "tolerances", {"rtol", "atol", "blowup_bound", "net", "picard"});
    read(t, "rtol", c.tolerances.rtol);
    read(t, "atol", c.tolerances.atol);
    read(t, "blowup_bound", c.tolerances.blowup_bound);
    read(t, "net", c.tolerances.net);
    read(t, "picard", c.tolerances.picard);
    require_positive(c.tolerances.rtol, "tolerances.rtol");
    require_positive(c.tolerances.atol, "tolerances.atol");
    require_positive(c.tolerances.blowup_bound, "tolerances.blowup_bound");
    require_positive(c.tolerances.net, "tolerances.net");
    require_positive(c.tolerances.picard, "tolerances.picard");
  }
  if (j.contains("certificate")) {
    const json& t = j.at("certificate");
    require_object(t, "certificate");
    reject_unknown(t, "certificate", {"b", "c", "grid"});
    read(t, "b", c.certificate.b);
    read(t, "c", c.certificate.c);
    read(t, "grid", c.certificate.grid);
    require_positive(c.certificate.b, "certificate.b");
    require_positive(c.certificate.c, "certificate.c");
    if (c.certificate.grid < 9) throw ValidationError("certificate.grid must be >= 9");
  }
  read(j, "probes", c.probes);
  for (double u : c.probes) {
    if (u == 0.0) throw ValidationError("probes must exclude u = 0");
  }
  if (j.contains("growth")) {
    const json& g = j.at("growth");
    require_object(g, "growth");
    reject_unknown(g, "growth", {"center", "radii", "directions"});
    read(g, "center", c.growth.center);
    read(g, "radii", c.growth.radii);
    read(g, "directions", c.growth.directions);
    if (c.growth.directions < 1) throw ValidationError("growth.directions must be >= 1");
  }
  read(j, "kink_form", c.kink_form);
  kink_form_from_name(c.kink_form);
  read(j, "seed", c.seed);
  read(j, "workers", c.workers);
  if (c.workers < 1) throw ValidationError("workers must be >= 1");
  if (j.contains("output")) {
    const json& o = j.at("output");
    require_object(o, "output");
    reject_unknown(o, "output", {"path", "format", "samples"});
    read(o, "path", c.output.path);
    read(o, "format", c.output.format);
    read(o, "samples", c.output.samples);
    if (!c.output.format.empty()) format_from_name(c.output.format);
    if (c.output.samples < 2) throw ValidationError("output.samples must be >= 2");
  }
  return c;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return parse_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config has a value of the wrong type: ") + e.what());
  }
}

ScenarioConfig load_config(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["manifold"] = {{"name", c.manifold.name}};
  if (c.manifold.name == "euclidean") j["manifold"]["dim"] = c.manifold.dim;
  j["profile"] = profile_json(c.profile);
  j["net"] = c.net;
  j["data"] = {{"x0", c.data.x0}, {"xdot0", c.data.xdot0}, {"v0", c.data.v0}, {"vdot0", c.data.vdot0}};
  if (c.eps) j["eps"] = *c.eps;
  j["eps_schedule"] = c.eps_schedule;
  j["u_end"] = c.u_end;
  j["tolerances"] = {{"rtol", c.tolerances.rtol},
                     {"atol", c.tolerances.atol},
                     {"blowup_bound", c.tolerances.blowup_bound},
                     {"net", c.tolerances.net},
                     {"picard", c.tolerances.picard}};
  j["certificate"] = {{"b", c.certificate.b}, {"c", c.certificate.c}, {"grid", c.certificate.grid}};
  j["probes"] = c.probes;
  j["growth"] = {{"center", c.growth.center},
                 {"radii", c.growth.radii},
                 {"directions", c.growth.directions}};
  j["kink_form"] = c.kink_form;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output"] = {{"path", c.output.path}, {"format", c.output.format}, {"samples", c.output.samples}};
  return j.dump(2) + "\n";
}

}  // namespace impulse_geo::harness
