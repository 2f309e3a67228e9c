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
#include <sstream>
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/surface.hpp"
#include "flatpath/walk.hpp"

namespace flatpath {

namespace detail {

// Unfolds the charts met by rays leaving a corner inside [lo, hi] (angles in
// the corner's plane) up to length `bound`, and reports every vertex image
// seen on the way. Each branch follows one exit edge, so sheets around a
// cone point are never mixed.
class SectorUnfolding {
 public:
  SectorUnfolding(const TranslationSurface& s, Vec2 origin, double bound)
      : s_(s), origin_(origin), bound_(bound) {}

  std::vector<Vec2> run(int chart, int vertex, double lo, double hi) {
    visit(chart, {0.0, 0.0}, -1, vertex, lo, hi);
    return found_;
  }

 private:
  static constexpr std::size_t kMaxNodes = 2'000'000;
  static constexpr double kMinWidth = 1e-13;

  double angle_near(Vec2 d, double ref) const {
    return ref + std::atan2(cross(direction(ref), d), dot(direction(ref), d));
  }

  // First edge of the copy left by the ray at angle a, skipping the entry
  // edge (or the edges at the start vertex), or -1.
  int exit_of(const Polygon& q, Vec2 offset, int entry, int vertex, double a) const {
    const Vec2 dir = direction(a);
    int best = -1;
    double best_t = INFINITY;
    for (int e = 0; e < q.size(); ++e) {
      if (e == entry) continue;
      if (vertex >= 0 && (e == vertex || e == (vertex + q.size() - 1) % q.size())) continue;
      const auto hit = intersect_line_segment(origin_, dir, q.edge_start(e) + offset, q.edge_end(e) + offset);
      if (!hit || hit->s < -1e-9 || hit->s > 1.0 + 1e-9 || hit->t <= 1e-12) continue;
      if (entry >= 0) {
        // must lie beyond the entry crossing
        const auto in = intersect_line_segment(origin_, dir, q.edge_start(entry) + offset,
                                               q.edge_end(entry) + offset);
        if (in && hit->t <= in->t + 1e-12) continue;
      }
      if (hit->t < best_t) {
        best_t = hit->t;
        best = e;
      }
    }
    return best;
  }

  void visit(int chart, Vec2 offset, int entry, int vertex, double lo, double hi) {
    if (++nodes_ > kMaxNodes)
      throw Error(ErrorCode::NotFoundWithinBound, "unfolding exceeded the node limit; lower the bound");
    const Polygon& q = s_.polygon(chart);
    const double mid = 0.5 * (lo + hi);
    std::vector<double> cuts{lo, hi};
    for (const Vec2& w : q.vertices) {
      const Vec2 d = w + offset - origin_;
      const double len = norm(d);
      if (len <= 1e-12) continue;
      const double a = angle_near(d, mid);
      if (a < lo - 1e-12 || a > hi + 1e-12) continue;
      if (len <= bound_) found_.push_back(d);
      if (a > lo && a < hi) cuts.push_back(a);
    }
    std::sort(cuts.begin(), cuts.end());
    // Group consecutive sub-sectors by exit edge, then descend.
    int run_edge = -1;
    double run_lo = lo, run_hi = lo;
    auto flush = [&] {
      if (run_edge >= 0 && run_hi - run_lo > kMinWidth) {
        const EdgeRef f = s_.partner({chart, run_edge});
        const Polygon& r = s_.polygon(f.polygon);
        const Vec2 next = q.edge_start(run_edge) + offset - r.edge_end(f.edge);
        visit(f.polygon, next, f.edge, -1, run_lo, run_hi);
      }
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (b - a <= kMinWidth) continue;
      const int edge = exit_of(q, offset, entry, vertex, 0.5 * (a + b));
      // Past the bound along the whole sub-sector: nothing further to see.
      const int e = (edge >= 0 && nearest_on_edge(q, offset, edge, a, b) <= bound_) ? edge : -1;
      if (e != run_edge || a > run_hi + kMinWidth) {
        flush();
        run_edge = e;
        run_lo = a;
      }
      run_hi = b;
    }
    flush();
  }

  // Distance from the origin to the part of an edge inside the sub-sector.
  double nearest_on_edge(const Polygon& q, Vec2 offset, int e, double a, double b) const {
    const Vec2 p0 = q.edge_start(e) + offset, p1 = q.edge_end(e) + offset;
    double best = INFINITY;
    for (double ang : {a, b}) {
      const auto hit = intersect_line_segment(origin_, direction(ang), p0, p1);
      if (hit && hit->t > 0.0) best = std::min(best, hit->t);
    }
    const double foot = point_segment_distance(origin_, p0, p1);
    const Vec2 d = p1 - p0;
    const double u = std::clamp(dot(origin_ - p0, d) / dot(d, d), 0.0, 1.0);
    const double fa = angle_near(p0 + d * u - origin_, 0.5 * (a + b));
    if (fa >= a && fa <= b) best = std::min(best, foot);
    return best;
  }

  const TranslationSurface& s_;
  Vec2 origin_;
  double bound_;
  std::size_t nodes_ = 0;
  std::vector<Vec2> found_;
};

}  // namespace detail

/// Length of the shortest saddle connection (a straight segment between
/// cone-point images, loops included) not longer than length_bound.
/// Candidates are vertex images of charts unfolded around each corner; each
/// candidate direction is confirmed by walking the flow from the corner.
inline double shortest_singularity_separation(const TranslationSurface& s, double length_bound) {
  if (!(length_bound > 0.0))
    throw Error(ErrorCode::NotFoundWithinBound, "length bound must be positive");
  const double reach = length_bound * (1.0 + 1e-9);
  double best = INFINITY;
  for (int pi = 0; pi < s.polygon_count(); ++pi) {
    const Polygon& p = s.polygon(pi);
    for (int v = 0; v < p.size(); ++v) {
      const Vec2 origin = p.vertex(v);
      std::vector<double> angles;
      const Vec2 out = p.edge_vector(v);
      const double lo = std::atan2(out.y, out.x);
      detail::SectorUnfolding unfold(s, origin, reach);
      for (const Vec2& d : unfold.run(pi, v, lo, lo + p.interior_angle(v))) {
        if (norm(d) > reach) continue;
        if (corner_wedge_contains(p, v, d)) angles.push_back(std::atan2(d.y, d.x));
      }
      std::sort(angles.begin(), angles.end());
      angles.erase(std::unique(angles.begin(), angles.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                   angles.end());
      for (double a : angles) {
        const WalkResult r = walk_ray(s, {pi, origin, -1, v}, direction(a), reach);
        if (r.end == WalkEnd::Vertex) best = std::min(best, r.time);
      }
    }
  }
  if (!(best <= reach)) {
    std::ostringstream msg;
    msg << "no saddle connection of length <= " << length_bound;
    throw Error(ErrorCode::NotFoundWithinBound, msg.str());
  }
  return best;
}

/// Shortest saddle connection, searched up to the shortest polygon edge
/// (every edge joins two cone-point images, so the search always succeeds).
inline double shortest_singularity_separation(const TranslationSurface& s) {
  double bound = INFINITY;
  for (const auto& p : s.polygons())
    for (int e = 0; e < p.size(); ++e) bound = std::min(bound, norm(p.edge_vector(e)));
  return shortest_singularity_separation(s, bound);
}

/// Largest admissible radius for circular obstacles: below half the
/// singularity separation, and small enough that each obstacle stays inside
/// the sectors of its own corners in every chart.
inline double max_circular_epsilon(const TranslationSurface& s) {
  return std::min(0.5 * shortest_singularity_separation(s), chart_feature_size(s));
}

}  // namespace flatpath
