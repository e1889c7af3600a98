#include "impulse_geo/errors.hpp"
#include "impulse_geo/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace hx = impulse_geo::harness;

namespace {

struct Overrides {
  std::string config;
  std::string output;
  std::string format;
  std::string net;
  std::string kink_form;
  double eps = 0.0;
  double u_end = 0.0;
  int workers = 0;
  bool dump_config = false;
};

void write_file(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw impulse_geo::ValidationError("cannot write '" + file + "'");
  out << text;
}

// "out/run.csv" + "limit_path" -> "out/run.limit_path.csv"
std::string sibling(const std::string& path, const std::string& label, hx::Format f) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string stem =
      dot != std::string::npos && (slash == std::string::npos || dot > slash) ? path.substr(0, dot) : path;
  const char* ext = f == hx::Format::csv ? ".csv" : f == hx::Format::svg ? ".svg" : ".txt";
  return stem + "." + label + ext;
}

int execute(const std::string& sub, const Overrides& o) {
  auto config = hx::load_config(o.config);
  if (!o.output.empty()) config.output.path = o.output;
  if (!o.format.empty()) config.output.format = o.format;
  if (!o.net.empty()) config.net = o.net;
  if (!o.kink_form.empty()) config.kink_form = o.kink_form;
  if (o.eps > 0.0) config.eps = o.eps;
  if (o.u_end > 0.0) config.u_end = o.u_end;
  if (o.workers > 0) config.workers = o.workers;
  // overrides go through the same validation as the file
  config = hx::parse_config(hx::serialize_config(config));
  if (o.workers > 0) {
    config.workers = o.workers;
  } else {
    config.workers = hx::resolve_workers(config);
  }

  if (o.dump_config) {
    std::cout << hx::serialize_config(config);
    return 0;
  }

  const auto artifacts = hx::run(sub, config);
  bool ok = true;
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    const auto& a = artifacts[i];
    const hx::Format f = i == 0 && !config.output.format.empty() ? hx::format_from_name(config.output.format)
                                                                 : hx::default_format(a.kind);
    const std::string text = hx::emit(a, f);
    if (const auto* r = std::get_if<hx::Report>(&a.payload)) ok = ok && r->ok;
    if (config.output.path.empty()) {
      if (i == 0) std::cout << text;
      continue;
    }
    const std::string file = i == 0 ? config.output.path : sibling(config.output.path, a.label, f);
    write_file(file, text);
    write_file(file + ".meta.json", hx::provenance_json(a));
    std::cerr << "wrote " << file << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesics of impulsive N-fronted waves with regularized profiles"};
  app.set_version_flag("--version", hx::tool_version);
  app.require_subcommand(1);

  Overrides o;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"integrate", "integrate one regularized geodesic and write a path CSV"},
      {"limit", "build the eps -> 0 limit geodesic and its jump and kink coefficients"},
      {"certify", "compute the existence certificate (alpha, eps0) at the data"},
      {"sweep", "convergence table over eps_schedule"},
      {"verify-net", "check the strict delta net properties of the configured net"},
      {"classify-growth", "fit the growth exponent of the profile at spatial infinity"},
  };
  for (const auto& [name, help] : subs) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("-c,--config", o.config, "scenario JSON file")->required()->check(CLI::ExistingFile);
    sc->add_option("-o,--output", o.output, "output file (default stdout)");
    sc->add_option("-f,--format", o.format, "csv | svg | text");
    sc->add_option("--net", o.net, "delta net name");
    sc->add_option("--kink-form", o.kink_form, "published | energy");
    sc->add_option("--eps", o.eps, "strip half-width");
    sc->add_option("--u-end", o.u_end, "end of the integration interval");
    sc->add_option("-j,--workers", o.workers, "worker threads for sweep");
    sc->add_flag("--dump-config", o.dump_config, "print the effective config and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return execute(sub, o);
  } catch (const impulse_geo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const impulse_geo::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const impulse_geo::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
