#include "support.hpp"

#include "impulse_geo/errors.hpp"
#include "impulse_geo/harness.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>

using namespace igt;
namespace hx = impulse_geo::harness;

namespace {

const char* flat_linear = R"({
  "schema_version": 1,
  "manifold": {"name": "euclidean", "dim": 2},
  "profile": {"name": "linear", "coeffs": [1, 0]},
  "net": "mollifier",
  "data": {"x0": [0, 0], "xdot0": [1, 0]},
  "eps": 0.01,
  "eps_schedule": [0.125, 0.0625, 0.03125, 0.015625],
  "output": {"samples": 51}
})";

std::string with(const std::string& key_value) {
  std::string s = flat_linear;
  s.insert(s.find('{') + 1, "\n  " + key_value + ",");
  return s;
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config round trip is the identity") {
    const auto a = hx::parse_config(flat_linear);
    const auto b = hx::parse_config(hx::serialize_config(a));
    CHECK(a == b);
    CHECK(hx::serialize_config(a) == hx::serialize_config(b));
    const char* others[] = {
        R"({"schema_version": 1, "manifold": {"name": "hyperbolic_half_plane"},
            "profile": {"name": "gaussian-bump", "amplitude": 2, "center": [0, 1], "width": 0.3},
            "data": {"x0": [0, 1], "xdot0": [0.2, 0.1], "v0": 0.5}, "kink_form": "energy", "seed": 42})",
        R"({"schema_version": 1, "manifold": {"name": "euclidean", "dim": 3},
            "profile": {"name": "quadratic-form", "matrix": [[1,0,0],[0,2,0],[0,0,3]]},
            "data": {"x0": [0, 0, 0], "xdot0": [1, 0, 0]}, "probes": [-1, 0.5], "workers": 3})",
    };
    for (const char* text : others) {
      const auto c = hx::parse_config(text);
      CHECK(hx::parse_config(hx::serialize_config(c)) == c);
    }
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(hx::parse_config(with(R"("colour": 3)")), ValidationError);
    CHECK_THROWS_AS(hx::parse_config(R"({"schema_version": 2, "data": {"x0": [0,0], "xdot0": [1,0]}})"), ValidationError);
    CHECK_THROWS_AS(hx::parse_config(R"({"data": {"x0": [0,0], "xdot0": [1,0]}})"), ValidationError);
    CHECK_THROWS_AS(hx::parse_config(with(R"("u_end": -1)")), ValidationError);
    CHECK_THROWS_AS(hx::parse_config("{not json"), ValidationError);
    std::string bad_eps = flat_linear;
    bad_eps.replace(bad_eps.find("0.01"), 4, "0.75");
    CHECK_THROWS_AS(hx::parse_config(bad_eps), ValidationError);
    std::string increasing = flat_linear;
    increasing.replace(increasing.find("0.125"), 5, "0.001");
    CHECK_THROWS_AS(hx::parse_config(increasing), ValidationError);
    std::string wrong_type = flat_linear;
    wrong_type.replace(wrong_type.find("\"eps\": 0.01"), 11, "\"eps\": \"x\"");
    CHECK_THROWS_AS(hx::parse_config(wrong_type), ValidationError);
    std::string nested = flat_linear;
    nested.replace(nested.find("\"samples\""), 9, "\"rows\"");
    CHECK_THROWS_AS(hx::parse_config(nested), ValidationError);
  }

  TEST_CASE("unknown names list the known ones") {
    auto c = hx::parse_config(flat_linear);
    try {
      hx::build_net("dirac");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("mollifier") != std::string::npos);
    }
    c.manifold.name = "torus";
    CHECK_THROWS_AS(hx::build_manifold(c.manifold), ValidationError);
    std::string dirac = flat_linear;
    dirac.replace(dirac.find("\"mollifier\""), 11, "\"dirac\"");
    CHECK_THROWS_AS(hx::parse_config(dirac), ValidationError);
    CHECK_THROWS_AS(hx::run("explode", hx::parse_config(flat_linear)), ValidationError);
    CHECK_THROWS_AS(hx::parse_config(R"({"schema_version": 1, "profile": {"name": "sine"}, "data": {"x0": [0,0], "xdot0": [1,0]}})"),
                    ValidationError);
  }

  TEST_CASE("certify reports alpha 2/3 and eps0 1/3 for the flat linear scenario") {
    const auto arts = hx::run("certify", hx::parse_config(flat_linear));
    REQUIRE(arts.size() == 1);
    const auto text = hx::emit(arts[0], hx::Format::text);
    CHECK(text.find("alpha           0.66666666666666663\n") != std::string::npos);
    CHECK(text.find("eps0            0.33333333333333331\n") != std::string::npos);
    CHECK(text.find("eps_admissible  true") != std::string::npos);
    CHECK(hx::emit(arts[0], hx::Format::csv).rfind("key,value\n", 0) == 0);
    CHECK_THROWS_AS(hx::emit(arts[0], hx::Format::svg), ValidationError);
  }

  TEST_CASE("integrate writes one row per sample with the path columns") {
    const auto arts = hx::run("integrate", hx::parse_config(flat_linear));
    const auto csv = hx::emit(arts[0], hx::Format::csv);
    CHECK(csv.rfind("u,x1,x2,xdot1,xdot2,v,vdot,energy\n", 0) == 0);
    CHECK(lines(csv) == 52);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(hx::emit(arts[0], hx::Format::svg).find("<polyline") != std::string::npos);
    CHECK_THROWS_AS(hx::emit(arts[0], hx::Format::text), ValidationError);
  }

  TEST_CASE("sweep table has the fixed header and one row per eps") {
    const auto arts = hx::run("sweep", hx::parse_config(flat_linear));
    const auto csv = hx::emit(arts[0], hx::Format::csv);
    CHECK(csv.rfind("eps,err_x,err_xdot,err_v,order\n", 0) == 0);
    CHECK(lines(csv) == 5);
    const auto svg = hx::emit(arts[0], hx::Format::svg);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("err_xdot") != std::string::npos);
  }

  TEST_CASE("sweep with a vanishing profile is exact") {
    auto c = hx::parse_config(flat_linear);
    c.profile = hx::ProfileSpec{};
    const auto arts = hx::run("sweep", c);
    for (const auto& r : std::get<ConvergenceTable>(arts[0].payload).rows) {
      CHECK(r.err_x < 1e-10);
      CHECK(r.err_xdot < 1e-10);
      CHECK(r.err_v < 1e-10);
    }
  }

  TEST_CASE("repeated runs are byte identical") {
    const auto c = hx::parse_config(flat_linear);
    for (const char* sub : {"integrate", "sweep", "limit", "certify"}) {
      const auto a = hx::run(sub, c);
      const auto b = hx::run(sub, c);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        const auto f = hx::default_format(a[i].kind);
        CHECK(hx::emit(a[i], f) == hx::emit(b[i], f));
      }
    }
  }

  TEST_CASE("worker count does not change the table") {
    auto c = hx::parse_config(flat_linear);
    const auto one = hx::emit(hx::run("sweep", c)[0], hx::Format::csv);
    c.workers = 3;
    CHECK(hx::emit(hx::run("sweep", c)[0], hx::Format::csv) == one);
  }

  TEST_CASE("environment overrides the worker count") {
    auto c = hx::parse_config(flat_linear);
    setenv("IMPULSE_GEO_WORKERS", "5", 1);
    CHECK(hx::resolve_workers(c) == 5);
    setenv("IMPULSE_GEO_WORKERS", "zero", 1);
    CHECK_THROWS_AS(hx::resolve_workers(c), ValidationError);
    unsetenv("IMPULSE_GEO_WORKERS");
    CHECK(hx::resolve_workers(c) == 1);
  }

  TEST_CASE("verify-net reports pass and fail") {
    auto c = hx::parse_config(flat_linear);
    const auto good = hx::run("verify-net", c);
    CHECK(std::get<hx::Report>(good[0].payload).ok);
    c.net = "fixed_support";
    const auto bad = hx::run("verify-net", c);
    CHECK_FALSE(std::get<hx::Report>(bad[0].payload).ok);
    CHECK(hx::emit(bad[0], hx::Format::text).find("support_shrinks     false") != std::string::npos);
  }

  TEST_CASE("limit reports both kink forms") {
    const auto arts = hx::run("limit", hx::parse_config(flat_linear));
    REQUIRE(arts.size() == 2);
    const auto text = hx::emit(arts[0], hx::Format::text);
    CHECK(text.find("kink_coeff_published  -1.25") != std::string::npos);
    CHECK(text.find("kink_coeff_energy     -0.625") != std::string::npos);
    CHECK(arts[1].kind == hx::ArtifactKind::path);
  }

  TEST_CASE("classify-growth") {
    auto c = hx::parse_config(flat_linear);
    c.profile.name = "radial-power";
    c.profile.power = 1.5;
    const auto text = hx::emit(hx::run("classify-growth", c)[0], hx::Format::text);
    CHECK(text.find("subquadratic") != std::string::npos);
  }

  TEST_CASE("provenance on every artifact") {
    const auto c = hx::parse_config(flat_linear);
    auto c2 = c;
    c2.seed = 9;
    for (const char* sub : {"integrate", "limit", "certify", "sweep", "verify-net", "classify-growth"}) {
      for (const auto& a : hx::run(sub, c)) {
        CHECK(a.provenance.config_hash.size() == 16);
        CHECK(a.provenance.tool_version == hx::tool_version);
        CHECK(hx::provenance_json(a).find(a.provenance.config_hash) != std::string::npos);
      }
    }
    CHECK(hx::provenance_of(c).config_hash != hx::provenance_of(c2).config_hash);
    CHECK(hx::provenance_of(c2).seed == 9);
  }

  TEST_CASE("missing inputs for a subcommand are validation errors") {
    auto c = hx::parse_config(flat_linear);
    c.eps.reset();
    CHECK_THROWS_AS(hx::run("integrate", c), ValidationError);
    c.eps_schedule.clear();
    CHECK_THROWS_AS(hx::run("sweep", c), ValidationError);
    c = hx::parse_config(flat_linear);
    c.manifold.name = "hyperbolic_half_plane";
    CHECK_THROWS_AS(hx::run("integrate", c), ValidationError);
  }
}
