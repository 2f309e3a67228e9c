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

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/surface.hpp"
#include "flatpath/tracer.hpp"
#include "flatpath/walk.hpp"

namespace flatpath {

/// Points of the transversal swept upward until their first return: all
/// share one return time (the height) and fill a width x height rectangle.
struct Rectangle {
  double width = 0.0;
  double height = 0.0;
  int prong = 0;     // transversal prong carrying the base
  double u0 = 0.0;   // base interval along that prong
  double u1 = 0.0;
};

struct ZipperedDecomposition {
  std::vector<Rectangle> rectangles;
  double covered_area = 0.0;       // sum of width * height
  double transversal_length = 0.0;
};

struct ZipperedOptions {
  double epsilon = 0.5;       // half-length of the transversal at each cone point
  double height_bound = 1e3;  // give up on orbits longer than this
  ProngPolicy policy = ProngPolicy::All;
};

namespace detail {

inline constexpr double kReturnGap = 1e-12;

// Chart position of the point at parameter u on a prong, placed in the chart
// the flow direction `dir` moves into.
inline ChartPosition transversal_point(const SegmentObstacles& obs, int prong, double u, Vec2 dir) {
  const TranslationSurface& s = obs.surface();
  for (int chart = 0; chart < s.polygon_count(); ++chart) {
    const Polygon& poly = s.polygon(chart);
    for (const auto& piece : obs.pieces(chart)) {
      if (piece.prong != prong || u < piece.u0 - 1e-15 || u > piece.u1 + 1e-15) continue;
      const double span = piece.u1 - piece.u0;
      const Vec2 p = piece.a + ((u - piece.u0) / span) * (piece.b - piece.a);
      int on_edge = piece.edge;
      if (on_edge < 0) {
        for (int e = 0; e < poly.size(); ++e) {
          if (point_segment_distance(p, poly.edge_start(e), poly.edge_end(e)) <= kCornerTolerance) {
            on_edge = e;
            break;
          }
        }
      }
      if (on_edge < 0) return {chart, p, -1, -1};
      if (dot(poly.outward_normal(on_edge), dir) < 0.0) return {chart, p, on_edge, -1};
    }
  }
  throw Error(ErrorCode::InvalidState, "transversal point not found in any chart");
}

struct Landing {
  WalkEnd end;
  double time;
  int prong = -1;
  double u = 0.0;
};

// Walks from start in direction dir until the transversal is crossed after
// a strictly positive time.
inline Landing land_on_transversal(const SegmentObstacles& obs, ChartPosition start, Vec2 dir,
                                   double bound) {
  const TranslationSurface& s = obs.surface();
  std::optional<TransversalPiece> landed;
  Vec2 landing_point;
  auto visit = [&](int chart, Vec2 origin, Vec2 d, double elapsed,
                   double limit) -> std::optional<double> {
    const double lo = std::max(kReturnGap - elapsed, -1e-12);
    if (const auto c = obs.first_crossing(chart, origin, d, lo, limit)) {
      landed = obs.pieces(chart)[static_cast<std::size_t>(c->piece)];
      landing_point = origin + c->t * d;
      return c->t;
    }
    return std::nullopt;
  };
  const WalkResult r = walk_ray(s, start, dir, bound, visit);
  Landing out{r.end, r.time};
  if (r.end == WalkEnd::Hit) {
    const Vec2 ab = landed->b - landed->a;
    const double frac = std::clamp(dot(landing_point - landed->a, ab) / dot(ab, ab), 0.0, 1.0);
    out.prong = landed->prong;
    out.u = landed->u0 + frac * (landed->u1 - landed->u0);
  }
  return out;
}

inline void check_disjoint(const SegmentObstacles& obs) {
  const TranslationSurface& s = obs.surface();
  for (int chart = 0; chart < s.polygon_count(); ++chart) {
    const auto& list = obs.pieces(chart);
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        const Vec2 a = list[i].a, ab = list[i].b - list[i].a;
        const double len = norm(ab);
        const Vec2 unit = (1.0 / len) * ab;
        if (std::abs(cross(unit, list[j].a - a)) > 1e-12 ||
            std::abs(cross(unit, list[j].b - a)) > 1e-12)
          continue;
        const double p0 = dot(list[j].a - a, unit), p1 = dot(list[j].b - a, unit);
        const double overlap = std::min(len, std::max(p0, p1)) - std::max(0.0, std::min(p0, p1));
        if (overlap > 1e-9) {
          std::ostringstream msg;
          msg << "transversal prongs " << list[i].prong << " and " << list[j].prong
              << " overlap in chart " << chart << "; the horizontal leaf is shorter than the"
              << " transversal";
          throw Error(ErrorCode::OverlappingTransversal, msg.str());
        }
      }
    }
  }
}

}  // namespace detail

/// Zippered rectangles of the vertical flow over horizontal transversals of
/// half-length epsilon centered at the cone points.
///
/// The base of every rectangle is a maximal interval of the transversal on
/// which the upward first return time is constant. Its endpoints are where
/// downward separatrices from cone points, or downward orbits of transversal
/// endpoints, first land back on the transversal. A point at height y above
/// the base first meets the transversal after flowing down for time y, so the
/// rectangles encode the segment-obstacle free paths in direction -pi/2.
inline ZipperedDecomposition compute_decomposition(const TranslationSurface& s,
                                                   const ZipperedOptions& opt = {}) {
  const double down_theta = -kPi / 2.0;
  const SegmentObstacles obs(s, opt.epsilon, down_theta, opt.policy);
  detail::check_disjoint(obs);
  const Vec2 down = direction(down_theta);
  const Vec2 up = -down;
  const auto& prongs = obs.prongs();

  std::vector<std::vector<double>> cuts(prongs.size());
  for (std::size_t k = 0; k < prongs.size(); ++k) cuts[k] = {0.0, prongs[k].length};

  for (int cls = 0; cls < static_cast<int>(s.cone_classes().size()); ++cls) {
    for (const Corner& c : corners_emitting(s, cls, down)) {
      const ChartPosition start{c.polygon, s.polygon(c.polygon).vertex(c.vertex), -1, c.vertex};
      const auto landing = detail::land_on_transversal(obs, start, down, opt.height_bound);
      if (landing.end != WalkEnd::Hit) continue;
      const Prong& target = prongs[static_cast<std::size_t>(landing.prong)];
      if (target.length == opt.epsilon && std::abs(landing.u - target.length) <= 1e-12)
        throw Error(ErrorCode::IncompleteDecomposition,
                    "a separatrix lands on a transversal endpoint; perturb direction or surface");
      cuts[static_cast<std::size_t>(landing.prong)].push_back(landing.u);
    }
  }
  for (std::size_t k = 0; k < prongs.size(); ++k) {
    if (prongs[k].length < opt.epsilon) continue;  // ends at a cone point
    const auto start = detail::transversal_point(obs, static_cast<int>(k), prongs[k].length, down);
    const auto landing = detail::land_on_transversal(obs, start, down, opt.height_bound);
    if (landing.end == WalkEnd::Hit) cuts[static_cast<std::size_t>(landing.prong)].push_back(landing.u);
  }

  ZipperedDecomposition out;
  for (std::size_t k = 0; k < prongs.size(); ++k) {
    auto& c = cuts[k];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end(), [](double a, double b) { return b - a <= 1e-12; }),
            c.end());
    out.transversal_length += prongs[k].length;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      const double width = c[i + 1] - c[i];
      if (width <= 1e-12) continue;
      const double mid = 0.5 * (c[i] + c[i + 1]);
      const auto start = detail::transversal_point(obs, static_cast<int>(k), mid, up);
      const auto landing = detail::land_on_transversal(obs, start, up, opt.height_bound);
      if (landing.end == WalkEnd::Censored) continue;
      out.rectangles.push_back({width, landing.time, static_cast<int>(k), c[i], c[i + 1]});
      out.covered_area += width * landing.time;
    }
  }

  if (out.covered_area < s.total_area() - 1e-6) {
    std::ostringstream msg;
    msg << "rectangles cover area " << out.covered_area << " of " << s.total_area()
        << " (an orbit exceeded height " << opt.height_bound
        << " or a vertical cylinder misses the transversal); perturb direction or surface";
    throw Error(ErrorCode::IncompleteDecomposition, msg.str());
  }
  return out;
}

/// Area of the points whose downward flow first meets the transversal after
/// time t: sum of width * max(height - t, 0).
inline double exact_distribution(const ZipperedDecomposition& z, double t) {
  double total = 0.0;
  for (const auto& r : z.rectangles) total += r.width * std::max(r.height - t, 0.0);
  return total;
}

/// Distinct heights (merged within 1e-9) with their total widths, ascending.
inline std::vector<std::pair<double, double>> heights_histogram(const ZipperedDecomposition& z) {
  std::vector<std::pair<double, double>> hw;
  for (const auto& r : z.rectangles) hw.emplace_back(r.height, r.width);
  std::sort(hw.begin(), hw.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [h, w] : hw) {
    if (!out.empty() && h - out.back().first <= 1e-9) out.back().second += w;
    else out.emplace_back(h, w);
  }
  return out;
}

}  // namespace flatpath
