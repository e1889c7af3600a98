#include "impulse_geo/errors.hpp"
#include "impulse_geo/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace impulse_geo::harness {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Format format_from_name(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "svg") return Format::svg;
  if (name == "text") return Format::text;
  throw ValidationError("unknown format '" + name + "' (known: csv, svg, text)");
}

Format default_format(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::path: return Format::csv;
    case ArtifactKind::table: return Format::csv;
    case ArtifactKind::certificate: return Format::text;
    case ArtifactKind::report: return Format::text;
  }
  return Format::text;
}

namespace {

const char* format_name(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::svg: return "svg";
    case Format::text: return "text";
  }
  return "text";
}

std::string aligned(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::size_t width = 0;
  for (const auto& [k, _] : kv) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : kv) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
  return out;
}

std::string vec_text(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

std::vector<std::pair<std::string, std::string>> certificate_entries(const CertificatePayload& p) {
  const auto& c = p.certificate;
  std::vector<std::pair<std::string, std::string>> kv = {
      {"chart", c.chart},
      {"x_center", vec_text(c.x_center)},
      {"xdot_center", vec_text(c.xdot_center)},
      {"b", fmt(c.b)},
      {"c", fmt(c.c)},
      {"K", fmt(c.K)},
      {"i1_radius", fmt(c.i1_radius)},
      {"i2_radius", fmt(c.i2_radius)},
      {"norm_F1", fmt(c.norm_F1)},
      {"norm_F2", fmt(c.norm_F2)},
      {"lip_F1", fmt(c.lip_F1)},
      {"lip_F2", fmt(c.lip_F2)},
      {"grid", std::to_string(c.grid)},
      {"alpha", fmt(c.alpha)},
      {"eps0", fmt(c.eps0)},
      {"weissinger_sum", fmt(p.weissinger_sum)},
  };
  if (p.eps) {
    kv.emplace_back("eps", fmt(*p.eps));
    kv.emplace_back("eps_admissible", *p.eps <= c.eps0 ? "true" : "false");
  }
  return kv;
}

std::string path_csv(const PathSamples& p) {
  std::string out = "u";
  for (int i = 1; i <= p.dim; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= p.dim; ++i) out += ",xdot" + std::to_string(i);
  out += ",v,vdot,energy\n";
  for (const auto& row : p.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
    out += "\n";
  }
  return out;
}

std::string table_csv(const ConvergenceTable& t) {
  std::string out = "eps,err_x,err_xdot,err_v,order\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : t.rows) {
    out += fmt(r.eps) + "," + fmt(r.failed ? nan : r.err_x) + "," + fmt(r.failed ? nan : r.err_xdot) +
           "," + fmt(r.failed ? nan : r.err_v) + "," + fmt(r.order_so_far) + "\n";
  }
  return out;
}

std::string table_text(const ConvergenceTable& t) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-12s %-12s %-12s %-8s\n", "eps", "err_x", "err_xdot",
                "err_v", "order");
  out += line;
  for (const auto& r : t.rows) {
    if (r.failed) {
      std::snprintf(line, sizeof line, "%-12.5g failed: ", r.eps);
      out += line + r.failure + "\n";
      continue;
    }
    std::snprintf(line, sizeof line, "%-12.5g %-12.4e %-12.4e %-12.4e %-8.3f\n", r.eps, r.err_x,
                  r.err_xdot, r.err_v, r.order_so_far);
    out += line;
  }
  const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  out += aligned({{"chart", t.chart},
                  {"kink_form", kink_form_name(t.form)},
                  {"order_x", fmt(t.order_x)},
                  {"order_xdot", fmt(t.order_xdot)},
                  {"order_v", fmt(t.order_v)},
                  {"monotone_x", flag(t.monotone_x)},
                  {"monotone_xdot", flag(t.monotone_xdot)},
                  {"monotone_v", flag(t.monotone_v)}});
  return out;
}

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

// Axis transform is log10 on both axes when `log` is set.
std::string svg_plot(const std::vector<Series>& series, const std::string& xlabel,
                     const std::string& ylabel, bool log) {
  constexpr double W = 640, H = 480, L = 80, R = 150, T = 30, B = 60;
  const auto tx = [&](double v) { return log ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, tx(y));
      y1 = std::max(y1, tx(y));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (tx(y) - y0) / (y1 - y0) * (H - T - B); };

  char buf[256];
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
      "viewBox=\"0 0 640 480\">\n<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                L, T, W - L - R, H - T - B);
  out += buf;
  const auto tick = [&](double v) {
    std::snprintf(buf, sizeof buf, log ? "1e%.3g" : "%.4g", v);
    return std::string(buf);
  };
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = L + (W - L - R) * i / 4.0, sy = H - B - (H - T - B) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">", sx, H - B + 16);
    out += buf + tick(fx) + "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">", L - 6, sy + 4);
    out += buf + tick(fy) + "</text>\n";
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"13\" text-anchor=\"middle\">",
                (W - R + L) / 2, H - 20);
  out += buf + xlabel + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"20\" y=\"%g\" font-size=\"13\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 20 %g)\">",
                (H - B + T) / 2, (H - B + T) / 2);
  out += buf + ylabel + "</text>\n";

  int k = 0;
  for (const auto& s : series) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", px(s.points[i].first),
                    py(s.points[i].second));
      out += buf;
    }
    out += "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">", W - R + 10,
                  T + 16 + 18.0 * k++, s.color.c_str());
    out += buf + s.name + "</text>\n";
  }
  return out + "</svg>\n";
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string table_svg(const ConvergenceTable& t) {
  std::vector<Series> series = {{"err_x", palette[0], {}},
                                {"err_xdot", palette[1], {}},
                                {"err_v", palette[2], {}}};
  for (const auto& r : t.rows) {
    if (r.failed) continue;
    const double errs[] = {r.err_x, r.err_xdot, r.err_v};
    for (int i = 0; i < 3; ++i) {
      if (errs[i] > 0.0 && std::isfinite(errs[i])) series[i].points.emplace_back(r.eps, errs[i]);
    }
  }
  return svg_plot(series, "eps", "sup error over probes", true);
}

std::string path_svg(const PathSamples& p) {
  std::vector<Series> series;
  for (int i = 0; i < p.dim; ++i) {
    Series s{"x" + std::to_string(i + 1), palette[i % 6], {}};
    for (const auto& row : p.rows) s.points.emplace_back(row[0], row[static_cast<std::size_t>(1 + i)]);
    series.push_back(std::move(s));
  }
  return svg_plot(series, "u", "chart coordinates", false);
}

[[noreturn]] void unsupported(const RunArtifact& a, Format f) {
  throw ValidationError("format " + std::string(format_name(f)) + " is not available for " +
                        artifact_kind_name(a.kind) + " artifacts");
}

}  // namespace

std::string emit(const RunArtifact& a, Format f) {
  switch (a.kind) {
    case ArtifactKind::path: {
      const auto& p = std::get<PathSamples>(a.payload);
      if (f == Format::csv) return path_csv(p);
      if (f == Format::svg) return path_svg(p);
      break;
    }
    case ArtifactKind::table: {
      const auto& t = std::get<ConvergenceTable>(a.payload);
      if (f == Format::csv) return table_csv(t);
      if (f == Format::svg) return table_svg(t);
      return table_text(t);
    }
    case ArtifactKind::certificate: {
      const auto kv = certificate_entries(std::get<CertificatePayload>(a.payload));
      if (f == Format::text) return aligned(kv);
      if (f == Format::csv) {
        std::string out = "key,value\n";
        for (const auto& [k, v] : kv) out += k + ",\"" + v + "\"\n";
        return out;
      }
      break;
    }
    case ArtifactKind::report: {
      if (f == Format::text) return aligned(std::get<Report>(a.payload).entries);
      break;
    }
  }
  unsupported(a, f);
}

std::string provenance_json(const RunArtifact& a) {
  nlohmann::json j;
  j["kind"] = artifact_kind_name(a.kind);
  j["label"] = a.label;
  j["config_hash"] = a.provenance.config_hash;
  j["tool_version"] = a.provenance.tool_version;
  j["seed"] = a.provenance.seed;
  return j.dump(2) + "\n";
}

}  // namespace impulse_geo::harness
