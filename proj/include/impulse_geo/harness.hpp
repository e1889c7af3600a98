#pragma once

#include "impulse_geo/existence.hpp"
#include "impulse_geo/limits.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace impulse_geo::harness {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int schema_version = 1;

struct ManifoldSpec {
  std::string name = "euclidean";  // euclidean | hyperbolic_half_plane | sphere_stereographic
  int dim = 2;                     // euclidean only
  bool operator==(const ManifoldSpec&) const = default;
};

// Only the parameters of the named profile are read or written.
struct ProfileSpec {
  std::string name = "zero";  // zero | constant | linear | quadratic-form | radial-power | gaussian-bump
  double value = 0.0;
  std::vector<double> coeffs;
  double offset = 0.0;
  std::vector<std::vector<double>> matrix;
  std::vector<double> center;
  double power = 2.0;
  double scale = 1.0;
  double amplitude = 1.0;
  double width = 1.0;
  bool operator==(const ProfileSpec&) const = default;
};

struct DataSpec {
  std::vector<double> x0;
  std::vector<double> xdot0;
  double v0 = 0.0;
  double vdot0 = 0.0;
  bool operator==(const DataSpec&) const = default;
};

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-10;
  double blowup_bound = 1e8;
  double net = 1e-8;
  double picard = 1e-10;
  bool operator==(const Tolerances&) const = default;
};

struct CertificateSpec {
  double b = 1.0;
  double c = 1.0;
  int grid = 9;
  bool operator==(const CertificateSpec&) const = default;
};

struct GrowthSpec {
  std::vector<double> center;             // defaults to the origin
  std::vector<double> radii;              // defaults to 1, 2, 4, ..., 64
  int directions = 8;
  bool operator==(const GrowthSpec&) const = default;
};

struct OutputSpec {
  std::string path;    // empty: stdout
  std::string format;  // csv | svg | text; empty: chosen per artifact
  int samples = 201;   // path CSV rows
  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
  int schema_version = harness::schema_version;
  ManifoldSpec manifold;
  ProfileSpec profile;
  std::string net = "mollifier";
  DataSpec data;
  std::optional<double> eps;
  std::vector<double> eps_schedule;
  double u_end = 1.0;
  Tolerances tolerances;
  CertificateSpec certificate;
  std::vector<double> probes;
  GrowthSpec growth;
  std::string kink_form = "published";
  std::uint64_t seed = 0;
  int workers = 1;
  OutputSpec output;
  bool operator==(const ScenarioConfig&) const = default;
};

// Throws ValidationError on malformed input, unknown keys or out-of-range values.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& file);
std::string serialize_config(const ScenarioConfig& config);

std::vector<std::string> known_manifolds();
std::vector<std::string> known_profiles();
std::vector<std::string> known_nets();  // built-ins plus the two forced-failure families
std::vector<std::string> known_subcommands();

Manifold build_manifold(const ManifoldSpec& spec);
WaveProfile build_profile(const ProfileSpec& spec, int dim);
DeltaNet build_net(const std::string& name);
InitialData build_data(const DataSpec& spec, const Manifold& model);

struct Provenance {
  std::string config_hash;  // FNV-1a 64 of the serialized config, hex
  std::string tool_version;
  std::uint64_t seed = 0;
};

Provenance provenance_of(const ScenarioConfig& config);

enum class ArtifactKind { path, certificate, table, report };
std::string artifact_kind_name(ArtifactKind kind);

// Rows of u, x1..xn, xdot1..xdotn, v, vdot, energy.
struct PathSamples {
  int dim = 0;
  std::vector<std::vector<double>> rows;
};

struct CertificatePayload {
  ExistenceCertificate certificate;
  double weissinger_sum = 0.0;
  std::optional<double> eps;  // the configured eps, checked against eps0
};

// Ordered key-value lines; `ok` is false when a checked property fails.
struct Report {
  std::vector<std::pair<std::string, std::string>> entries;
  bool ok = true;
};

struct RunArtifact {
  ArtifactKind kind = ArtifactKind::report;
  std::string label;
  Provenance provenance;
  std::variant<PathSamples, CertificatePayload, ConvergenceTable, Report> payload;
};

int resolve_workers(const ScenarioConfig& config);

std::vector<RunArtifact> run(const std::string& subcommand, const ScenarioConfig& config);

enum class Format { csv, svg, text };
Format format_from_name(const std::string& name);
Format default_format(ArtifactKind kind);

// Throws ValidationError for unsupported kind/format pairs.
std::string emit(const RunArtifact& artifact, Format format);
std::string provenance_json(const RunArtifact& artifact);

// printf("%.17g") for doubles
std::string fmt(double x);

}  // namespace impulse_geo::harness
