/*
   Copyright 2026 The flatpath Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Surface spec files (JSON), result CSVs, and SVG plots.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "flatpath/distributions.hpp"
#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/surface.hpp"

namespace flatpath::io {

struct NamedSurface {
  std::string name;
  TranslationSurface surface;
};

namespace detail {

inline Vec2 to_vec(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::Parse, what + " must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline TranslationSurface make_builtin(const std::string& name, const nlohmann::json& params) {
  auto num = [&](const char* key, double fallback) {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
  };
  if (name == "square_torus") return square_torus();
  if (name == "golden_shear_torus") return golden_shear_torus();
  if (name == "regular_octagon") return regular_octagon();
  if (name == "l_surface") return l_surface(num("a", 1.0), num("b", 1.0));
  if (name == "torus_from_basis") {
    if (!params.contains("u") || !params.contains("v"))
      throw Error(ErrorCode::Parse, "torus_from_basis needs params u and v");
    return torus_from_basis(to_vec(params.at("u"), "params.u"), to_vec(params.at("v"), "params.v"));
  }
  throw Error(ErrorCode::Parse, "unknown builtin '" + name + "'");
}

}  // namespace detail

/// Builds a surface from a spec document. Either "builtin" (with optional
/// "params") or "polygons" + "gluings" must be present; an optional
/// "transform" [[a, b], [c, d]] with determinant 1 is applied afterwards.
inline NamedSurface surface_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw Error(ErrorCode::Parse, "surface spec must be a JSON object");
    NamedSurface out{doc.value("name", std::string{}), square_torus()};
    if (doc.contains("builtin")) {
      const std::string b = doc.at("builtin").get<std::string>();
      out.surface = detail::make_builtin(b, doc.value("params", nlohmann::json::object()));
      if (out.name.empty()) out.name = b;
    } else {
      if (!doc.contains("polygons") || !doc.contains("gluings"))
        throw Error(ErrorCode::Parse, "surface spec needs \"builtin\" or \"polygons\" and \"gluings\"");
      std::vector<Polygon> polys;
      for (const auto& pj : doc.at("polygons")) {
        Polygon p;
        for (const auto& v : pj) p.vertices.push_back(detail::to_vec(v, "polygon vertex"));
        polys.push_back(std::move(p));
      }
      std::vector<EdgeGluing> gl;
      for (const auto& g : doc.at("gluings")) {
        if (!g.is_array() || g.size() != 2)
          throw Error(ErrorCode::Parse, "each gluing must be [[polygon, edge], [polygon, edge]]");
        auto ref = [](const nlohmann::json& r) {
          if (!r.is_array() || r.size() != 2)
            throw Error(ErrorCode::Parse, "edge reference must be [polygon, edge]");
          return EdgeRef{r[0].get<int>(), r[1].get<int>()};
        };
        gl.push_back({ref(g[0]), ref(g[1])});
      }
      out.surface = build_surface(std::move(polys), std::move(gl));
      if (out.name.empty()) out.name = "custom";
    }
    if (doc.contains("transform")) {
      const auto& m = doc.at("transform");
      const Vec2 r0 = detail::to_vec(m.at(0), "transform row"), r1 = detail::to_vec(m.at(1), "transform row");
      out.surface = apply_matrix({r0.x, r0.y, r1.x, r1.y}, out.surface);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

/// Reads a spec file, or "builtin:NAME" for a parameterless builtin.
inline NamedSurface load_surface(const std::string& path) {
  constexpr std::string_view prefix = "builtin:";
  if (path.rfind(prefix, 0) == 0) {
    const std::string name = path.substr(prefix.size());
    return surface_from_json({{"builtin", name}});
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open surface spec '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "'" + path + "': " + e.what());
  }
  return surface_from_json(doc);
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw Error(ErrorCode::Parse, "bad number '" + std::string(text) + "' in " + what);
  return v;
}

/// Metadata carried in "# key=value" comment lines of a result CSV.
struct CsvMetadata {
  std::string surface;
  double epsilon = 0.0;
  std::string theta_mode;  // "averaged" or "fixed:<theta>"
  std::string obstacles;   // "circular", "segment", or "exact"
  std::uint64_t seed = 0;
};

inline void write_ccdf_csv(std::ostream& out, const EmpiricalCCDF& c, const CsvMetadata& m) {
  out << "# surface=" << m.surface << '\n'
      << "# epsilon=" << format_double(m.epsilon) << '\n'
      << "# theta_mode=" << m.theta_mode << '\n'
      << "# obstacles=" << m.obstacles << '\n'
      << "# samples=" << c.n_samples << '\n'
      << "# seed=" << m.seed << '\n'
      << "# censored=" << c.n_censored << '\n'
      << "# aborted=" << c.n_aborted << '\n'
      << "t,value,stderr\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    out << format_double(c.grid[i]) << ',' << format_double(c.values[i]) << ','
        << format_double(c.std_error[i]) << '\n';
}

struct ParsedCsv {
  EmpiricalCCDF ccdf;
  CsvMetadata meta;
};

inline ParsedCsv read_ccdf_csv(std::istream& in, const std::string& what = "csv") {
  ParsedCsv out;
  std::string line;
  bool header = false;
  auto to_count = [&](const std::string& v) {
    return static_cast<std::size_t>(parse_double(v, what));
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto start = line.find_first_not_of("# ");
      if (start == std::string::npos) continue;
      const auto body = line.substr(start);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq), val = body.substr(eq + 1);
      if (key == "surface") out.meta.surface = val;
      else if (key == "epsilon") out.meta.epsilon = parse_double(val, what);
      else if (key == "theta_mode") out.meta.theta_mode = val;
      else if (key == "obstacles") out.meta.obstacles = val;
      else if (key == "samples") out.ccdf.n_samples = to_count(val);
      else if (key == "seed") out.meta.seed = std::stoull(val);
      else if (key == "censored") out.ccdf.n_censored = to_count(val);
      else if (key == "aborted") out.ccdf.n_aborted = to_count(val);
      continue;
    }
    if (!header) {
      if (line != "t,value,stderr") throw Error(ErrorCode::Parse, what + ": expected header t,value,stderr");
      header = true;
      continue;
    }
    std::array<std::string_view, 3> cols;
    std::string_view rest = line;
    for (int k = 0; k < 3; ++k) {
      const auto comma = rest.find(',');
      if ((k < 2) == (comma == std::string_view::npos))
        throw Error(ErrorCode::Parse, what + ": row '" + line + "' does not have 3 columns");
      cols[static_cast<std::size_t>(k)] = rest.substr(0, comma);
      if (k < 2) rest = rest.substr(comma + 1);
    }
    out.ccdf.grid.push_back(parse_double(cols[0], what));
    out.ccdf.values.push_back(parse_double(cols[1], what));
    out.ccdf.std_error.push_back(parse_double(cols[2], what));
  }
  if (!header) throw Error(ErrorCode::Parse, what + ": missing header");
  return out;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct PlotSeries {
  std::string label;
  EmpiricalCCDF ccdf;
};

/// Standalone SVG with one polyline per series on shared axes.
inline void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series,
                           const std::string& title = "free path survivor functions") {
  constexpr double W = 720, H = 460, L = 70, R = 190, T = 40, B = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  double xmax = 0.0;
  for (const auto& s : series)
    for (double t : s.ccdf.grid) xmax = std::max(xmax, t);
  if (!(xmax > 0.0)) xmax = 1.0;
  auto px = [&](double t) { return L + (W - L - R) * t / xmax; };
  auto py = [&](double v) { return H - B - (H - T - B) * std::clamp(v, 0.0, 1.0); };

  out << std::fixed << std::setprecision(2);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << (L + (W - L - R) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n"
      << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = xmax * k / 4.0, v = k / 4.0;
    out << "<line x1=\"" << px(t) << "\" y1=\"" << H - B << "\" x2=\"" << px(t) << "\" y2=\""
        << H - B + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(t) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
        << format_double(t) << "</text>\n"
        << "<line x1=\"" << L - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << L << "\" y2=\"" << py(v)
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << L - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
        << format_double(v) << "</text>\n";
  }
  out << "<text x=\"" << (L + (W - L - R) / 2) << "\" y=\"" << H - 18
      << "\" text-anchor=\"middle\" font-size=\"13\">t (scaled free path 2&#949;&#964;)</text>\n"
      << "<text x=\"18\" y=\"" << (T + (H - T - B) / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << (T + (H - T - B) / 2) << ")\">measure{2&#949;&#964; &gt; t}</text>\n"
      << "</g>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % (sizeof colors / sizeof *colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const auto& c = series[i].ccdf;
    for (std::size_t k = 0; k < c.grid.size(); ++k)
      out << (k ? " " : "") << px(c.grid[k]) << ',' << py(c.values[k]);
    out << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(i);
    out << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 32 << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << W - R + 38 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[i].label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace flatpath::io
