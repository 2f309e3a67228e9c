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
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/surface.hpp"

namespace flatpath {

/// A ray passing within this distance of a polygon vertex is treated as
/// reaching the vertex.
inline constexpr double kCornerTolerance = 1e-12;
/// Angular tolerance for a direction to count as running along an edge.
inline constexpr double kDirectionTolerance = 1e-12;

/// A point in a chart. `edge` is set when the point lies on that edge (the
/// edge it entered through); `vertex` when it sits on a polygon vertex.
struct ChartPosition {
  int chart = 0;
  Vec2 point;
  int edge = -1;
  int vertex = -1;
};

struct ExitInfo {
  double t = 0.0;   // distance travelled inside the chart
  int edge = -1;    // edge crossed
  double s = 0.0;   // parameter along that edge
  int vertex = -1;  // vertex reached, when the exit is within corner tolerance
};

/// Whether `dir` points into the half-open wedge [outgoing edge, reversed
/// incoming edge) at vertex v of p. Each direction at a cone point belongs
/// to exactly one corner of the class under this convention.
inline bool corner_wedge_contains(const Polygon& p, int v, Vec2 dir) {
  const double interior = p.interior_angle(v);
  double a = ccw_angle(p.edge_vector(v), dir);
  if (a >= kTwoPi - kDirectionTolerance) a = 0.0;
  if (std::abs(a - interior) <= kDirectionTolerance) return false;
  return a < interior;
}

/// Corners of a cone class whose wedge contains dir.
inline std::vector<Corner> corners_emitting(const TranslationSurface& s, int cls, Vec2 dir) {
  std::vector<Corner> out;
  for (const Corner& c : s.cone_classes()[static_cast<std::size_t>(cls)].members) {
    if (corner_wedge_contains(s.polygon(c.polygon), c.vertex, dir)) out.push_back(c);
  }
  return out;
}

/// Where the ray from `from` with unit direction dir leaves its chart.
inline ExitInfo find_exit(const Polygon& poly, const ChartPosition& from, Vec2 dir) {
  const int n = poly.size();
  if (from.vertex >= 0) {
    const int v = from.vertex;
    const double a = ccw_angle(poly.edge_vector(v), dir);
    if (a <= kDirectionTolerance || a >= kTwoPi - kDirectionTolerance)
      return {norm(poly.edge_vector(v)), v, 1.0, (v + 1) % n};
    if (std::abs(a - poly.interior_angle(v)) <= kDirectionTolerance) {
      const int e = (v + n - 1) % n;
      return {norm(poly.edge_vector(e)), e, 0.0, e};
    }
  }

  ExitInfo best{INFINITY, -1, 0.0, -1};
  for (int e = 0; e < n; ++e) {
    if (e == from.edge) continue;
    if (from.vertex >= 0 && (e == from.vertex || (e + 1) % n == from.vertex)) continue;
    const auto hit = intersect_line_segment(from.point, dir, poly.edge_start(e), poly.edge_end(e));
    if (!hit || !(hit->t > 0.0)) continue;
    if (hit->s < -1e-12 || hit->s > 1.0 + 1e-12) continue;
    if (hit->t < best.t) best = {hit->t, e, std::clamp(hit->s, 0.0, 1.0), -1};
  }
  if (best.edge < 0) throw Error(ErrorCode::InvalidState, "ray failed to leave its chart");
  const double len = norm(poly.edge_vector(best.edge));
  if (best.s * len < kCornerTolerance) best.vertex = best.edge;
  else if ((1.0 - best.s) * len < kCornerTolerance) best.vertex = (best.edge + 1) % n;
  return best;
}

/// Carries a boundary exit into the glued chart.
inline ChartPosition cross_edge(const TranslationSurface& s, int chart, const ExitInfo& exit) {
  const EdgeRef from{chart, exit.edge};
  const EdgeRef to = s.partner(from);
  return {to.polygon, s.glue_point(from, exit.s), to.edge, -1};
}

enum class WalkEnd { Hit, Censored, Vertex };

struct WalkResult {
  WalkEnd end = WalkEnd::Censored;
  double time = 0.0;
  ChartPosition position;  // final chart position
};

/// Follows the straight-line flow from `start` in unit direction dir for at
/// most t_max, chart by chart. For each chord the visitor is called as
/// visit(chart, origin, dir, elapsed, limit) and may return the local time
/// in [0, limit] of an event inside the chord, which ends the walk as Hit.
/// A chord ending within corner tolerance of a vertex ends the walk as
/// Vertex.
template <class ChordVisitor>
WalkResult walk_ray(const TranslationSurface& s, ChartPosition start, Vec2 dir, double t_max,
                    ChordVisitor&& visit) {
  constexpr long kMaxSteps = 50'000'000;
  ChartPosition pos = start;
  double elapsed = 0.0;
  for (long step = 0; step < kMaxSteps; ++step) {
    const Polygon& poly = s.polygon(pos.chart);
    const ExitInfo exit = find_exit(poly, pos, dir);
    const double limit = std::min(exit.t, t_max - elapsed);
    if (const std::optional<double> hit = visit(pos.chart, pos.point, dir, elapsed, limit)) {
      return {WalkEnd::Hit, elapsed + *hit, {pos.chart, pos.point + *hit * dir}};
    }
    if (elapsed + exit.t >= t_max) {
      return {WalkEnd::Censored, t_max, {pos.chart, pos.point + (t_max - elapsed) * dir}};
    }
    elapsed += exit.t;
    if (exit.vertex >= 0) {
      return {WalkEnd::Vertex, elapsed, {pos.chart, poly.vertex(exit.vertex), -1, exit.vertex}};
    }
    pos = cross_edge(s, pos.chart, exit);
  }
  throw Error(ErrorCode::InvalidState, "walk exceeded the step limit");
}

inline WalkResult walk_ray(const TranslationSurface& s, ChartPosition start, Vec2 dir,
                           double t_max) {
  return walk_ray(s, start, dir, t_max,
                  [](int, Vec2, Vec2, double, double) { return std::optional<double>{}; });
}

}  // namespace flatpath
