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

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flatpath/flatpath.hpp"
#include "flatpath/io.hpp"

namespace flatpath {
namespace {

// Minimal well-formedness check: balanced tags, quoted attributes, no bare
// ampersands.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> open;
  std::size_t i = 0;
  while ((i = doc.find('<', i)) != std::string::npos) {
    const auto close = doc.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = doc.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2) return false;
    if (tag[0] == '/') {
      if (open.empty() || open.back() != tag.substr(1)) return false;
      open.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (!self_closing) open.push_back(name);
  }
  for (std::size_t a = doc.find('&'); a != std::string::npos; a = doc.find('&', a + 1)) {
    const auto semi = doc.find(';', a);
    if (semi == std::string::npos || semi - a > 6) return false;
  }
  return open.empty();
}

TEST(Json, PolygonsAndGluings) {
  const auto doc = nlohmann::json::parse(R"({
    "name": "integer L",
    "polygons": [[[0,0],[1,0],[2,0],[2,1],[1,1],[1,2],[0,2],[0,1]]],
    "gluings": [[[0,0],[0,5]], [[0,1],[0,3]], [[0,2],[0,7]], [[0,4],[0,6]]]
  })");
  const auto ns = io::surface_from_json(doc);
  EXPECT_EQ(ns.name, "integer L");
  EXPECT_EQ(ns.surface.stratum().kappa, 3);
  EXPECT_EQ(ns.surface.polygon(0).vertices, l_surface().polygon(0).vertices);
}

TEST(Json, BuiltinWithTransform) {
  const auto doc = nlohmann::json::parse(
      R"({"builtin": "torus_from_basis", "params": {"u": [2, 0], "v": [0.3, 0.5]},
          "transform": [[1, 0], [0.25, 1]]})");
  const auto ns = io::surface_from_json(doc);
  EXPECT_EQ(ns.name, "torus_from_basis");
  EXPECT_NEAR(ns.surface.polygon(0).vertex(1).y, 0.5, 1e-12);
}

TEST(Json, Errors) {
  auto code_of = [](const std::string& text) {
    try {
      io::surface_from_json(nlohmann::json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidState;
  };
  EXPECT_EQ(code_of(R"({"builtin": "klein_bottle"})"), ErrorCode::Parse);
  EXPECT_EQ(code_of(R"({"polygons": []})"), ErrorCode::Parse);
  EXPECT_EQ(code_of(R"({"polygons": [[[0,0],[1,0],[1,1],[0,1]]], "gluings": [[[0,0],[0,1]], [[0,2],[0,3]]]})"),
            ErrorCode::NonParallelEdges);
  EXPECT_EQ(code_of(R"({"builtin": "square_torus", "transform": [[2, 0], [0, 1]]})"),
            ErrorCode::DegenerateMatrix);
  try {
    io::load_surface("/nonexistent/spec.json");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
}

TEST(Csv, RoundTripIsExact) {
  SamplePlan p;
  p.n_samples = 3000;
  p.epsilon = 0.07;
  p.seed = 42;
  const auto c = estimate_Ftilde(l_surface(), p);
  std::stringstream buf;
  io::write_ccdf_csv(buf, c, {"l_surface", 0.07, "averaged", "segment", 42});
  const std::string text = buf.str();
  EXPECT_NE(text.find("\nt,value,stderr\n"), std::string::npos);
  const auto back = io::read_ccdf_csv(buf);
  EXPECT_TRUE(back.ccdf == c);
  EXPECT_EQ(back.meta.surface, "l_surface");
  EXPECT_EQ(back.meta.epsilon, 0.07);
  EXPECT_EQ(back.meta.seed, 42u);
  EXPECT_EQ(back.meta.obstacles, "segment");

  std::stringstream again;
  io::write_ccdf_csv(again, back.ccdf, back.meta);
  EXPECT_EQ(again.str(), text);
}

TEST(Csv, RejectsMalformedRows) {
  std::stringstream bad("t,value,stderr\n0,1\n");
  EXPECT_THROW(io::read_ccdf_csv(bad), Error);
  std::stringstream no_header("#\n0,1,0\n");
  EXPECT_THROW(io::read_ccdf_csv(no_header), Error);
}

TEST(Svg, IsWellFormed) {
  EmpiricalCCDF ramp;
  ramp.grid = TimeGrid{2.0, 21}.values();
  for (double t : ramp.grid) {
    ramp.values.push_back(std::max(1.0 - t, 0.0));
    ramp.std_error.push_back(0.0);
  }
  std::stringstream out;
  io::write_svg_plot(out, {{"ramp & <friends>", ramp}, {"second", ramp}});
  const std::string svg = out.str();
  EXPECT_TRUE(well_formed_xml(svg)) << svg;
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("&amp; &lt;friends&gt;"), std::string::npos);
  EXPECT_FALSE(well_formed_xml("<svg><g></svg>"));
}

}  // namespace
}  // namespace flatpath
