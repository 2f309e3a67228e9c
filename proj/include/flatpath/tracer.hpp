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

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/separation.hpp"
#include "flatpath/surface.hpp"
#include "flatpath/walk.hpp"

namespace flatpath {

/// A point of the surface (in a chart) together with a flow direction.
struct UnitTangentState {
  int chart = 0;
  Vec2 point;
  double theta = 0.0;
  int edge = -1;  // set when the point lies on this chart edge
};

enum class HitKind { Hit, Censored, SingularImpact };

struct HitResult {
  HitKind kind = HitKind::Censored;
  double time = 0.0;  // hit time, the cap for Censored, or when the singularity was reached

  bool hit() const { return kind == HitKind::Hit; }
  static HitResult make_hit(double t) { return {HitKind::Hit, t}; }
  static HitResult censored(double cap) { return {HitKind::Censored, cap}; }
};

inline void validate_state(const TranslationSurface& s, const UnitTangentState& st) {
  if (st.chart < 0 || st.chart >= s.polygon_count())
    throw Error(ErrorCode::InvalidState, "chart " + std::to_string(st.chart) + " does not exist");
  if (!std::isfinite(st.theta) || !s.polygon(st.chart).contains(st.point, 1e-9)) {
    std::ostringstream msg;
    msg << "point (" << st.point.x << ", " << st.point.y << ") is not inside chart " << st.chart;
    throw Error(ErrorCode::InvalidState, msg.str());
  }
}

struct EdgeStep {
  UnitTangentState next;  // on the entry edge of the glued chart
  Vec2 from;              // chord traversed, in the original chart
  Vec2 to;
};

/// Moves a state to the point where its forward ray leaves the chart, carried
/// across the gluing. Throws SingularImpact if the ray exits through a corner.
inline EdgeStep step_across_edge(const TranslationSurface& s, const UnitTangentState& st) {
  validate_state(s, st);
  const Vec2 d = direction(st.theta);
  const ChartPosition pos{st.chart, st.point, st.edge, -1};
  const ExitInfo exit = find_exit(s.polygon(st.chart), pos, d);
  if (exit.vertex >= 0)
    throw Error(ErrorCode::SingularImpact,
                "ray reaches vertex " + std::to_string(exit.vertex) + " of chart " +
                    std::to_string(st.chart));
  const ChartPosition next = cross_edge(s, st.chart, exit);
  return {{next.chart, next.point, st.theta, next.edge}, st.point, st.point + exit.t * d};
}

inline void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive and finite");
}

/// Closed epsilon-disks about every cone point. Each chart tests only its own
/// vertices, which is exact while epsilon < max_circular_epsilon(surface).
class CircularObstacles {
 public:
  CircularObstacles(const TranslationSurface& s, double epsilon)
      : CircularObstacles(s, epsilon, max_circular_epsilon(s)) {}

  // Takes a precomputed max_circular_epsilon(s).
  CircularObstacles(const TranslationSurface& s, double epsilon, double epsilon_limit)
      : surface_(&s), epsilon_(epsilon) {
    check_epsilon(epsilon);
    if (!(epsilon < epsilon_limit)) {
      std::ostringstream msg;
      msg << "circular obstacles need epsilon < " << epsilon_limit << ", got " << epsilon;
      throw Error(ErrorCode::InvalidEpsilon, msg.str());
    }
  }

  const TranslationSurface& surface() const { return *surface_; }
  double epsilon() const { return epsilon_; }

  /// Whether a chart point lies in the closed obstacle set.
  bool contains(int chart, Vec2 p) const {
    for (const Vec2& v : surface_->polygon(chart).vertices)
      if (ray_disk_entry(p, {1.0, 0.0}, v, epsilon_) == 0.0) return true;
    return false;
  }

  std::optional<double> first_entry(int chart, Vec2 origin, Vec2 dir, double limit) const {
    std::optional<double> best;
    for (const Vec2& v : surface_->polygon(chart).vertices) {
      const auto t = ray_disk_entry(origin, dir, v, epsilon_);
      if (t && *t <= limit && (!best || *t < *best)) best = t;
    }
    return best;
  }

 private:
  const TranslationSurface* surface_;
  double epsilon_;
};

/// Which perpendicular prongs at a cone point carry segment obstacles. A cone
/// point of angle 2pi(alpha+1) has alpha+1 prongs on each side.
enum class ProngPolicy {
  All,            // every perpendicular prong (any segment of length <= epsilon)
  CanonicalPair,  // one prong per side, from the first corner in chart order
};

/// Chart-local piece of a transversal prong.
struct TransversalPiece {
  int chart = 0;
  Vec2 a;           // point at prong parameter u0
  Vec2 b;           // point at prong parameter u1
  int prong = 0;
  double u0 = 0.0;  // distance from the cone point along the prong
  double u1 = 0.0;
  int edge = -1;    // chart edge the piece lies on, if any
};

struct Prong {
  Corner origin;
  int cone_class = 0;
  Vec2 direction;
  double length = 0.0;  // shorter than epsilon if the prong runs into a cone point
};

/// Geodesic segments of half-length epsilon centered at each cone point and
/// perpendicular to theta, split into chart-local pieces by following each
/// prong across gluings.
class SegmentObstacles {
 public:
  SegmentObstacles(const TranslationSurface& s, double epsilon, double theta,
                   ProngPolicy policy = ProngPolicy::All)
      : surface_(&s), epsilon_(epsilon), theta_(theta), by_chart_(s.polygon_count()) {
    check_epsilon(epsilon);
    const Vec2 d = direction(theta);
    const Vec2 n{-d.y, d.x};
    for (int cls = 0; cls < static_cast<int>(s.cone_classes().size()); ++cls) {
      for (Vec2 side : {n, -n}) {
        auto corners = corners_emitting(s, cls, side);
        if (policy == ProngPolicy::CanonicalPair && corners.size() > 1) corners.resize(1);
        for (const Corner& c : corners) add_prong(c, cls, side);
      }
    }
  }

  const TranslationSurface& surface() const { return *surface_; }
  double epsilon() const { return epsilon_; }
  double theta() const { return theta_; }
  const std::vector<Prong>& prongs() const { return prongs_; }
  const std::vector<TransversalPiece>& pieces(int chart) const {
    return by_chart_[static_cast<std::size_t>(chart)];
  }

  struct Crossing {
    double t;   // local time along the chord
    int piece;  // index into pieces(chart)
  };

  /// First crossing of a piece by the chord origin + t*dir, t in [lo, limit].
  std::optional<Crossing> first_crossing(int chart, Vec2 origin, Vec2 dir, double lo,
                                         double limit) const {
    std::optional<Crossing> best;
    const auto& list = pieces(chart);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto hit = intersect_line_segment(origin, dir, list[i].a, list[i].b);
      if (!hit) continue;
      if (hit->s < -1e-12 || hit->s > 1.0 + 1e-12) continue;
      if (hit->t < lo || hit->t > limit + 1e-12) continue;
      const double t = std::clamp(hit->t, std::max(lo, 0.0), std::max(limit, 0.0));
      if (!best || t < best->t) best = Crossing{t, static_cast<int>(i)};
    }
    return best;
  }

 private:
  void add_prong(Corner c, int cls, Vec2 dir) {
    const int id = static_cast<int>(prongs_.size());
    const Polygon& p = surface_->polygon(c.polygon);
    const ChartPosition start{c.polygon, p.vertex(c.vertex), -1, c.vertex};
    auto record = [&](int chart, Vec2 origin, Vec2 d, double elapsed, double limit) {
      if (limit > 0.0) add_piece({chart, origin, origin + limit * d, id, elapsed, elapsed + limit});
      return std::optional<double>{};
    };
    const WalkResult r = walk_ray(*surface_, start, dir, epsilon_, record);
    prongs_.push_back({c, cls, dir, r.end == WalkEnd::Vertex ? r.time : epsilon_});
  }

  void add_piece(TransversalPiece piece) {
    const Polygon& p = surface_->polygon(piece.chart);
    for (int e = 0; e < p.size(); ++e) {
      const Vec2 s0 = p.edge_start(e), s1 = p.edge_end(e);
      if (point_segment_distance(piece.a, s0, s1) > kCornerTolerance ||
          point_segment_distance(piece.b, s0, s1) > kCornerTolerance)
        continue;
      piece.edge = e;
      // A piece on an edge is also a piece of the glued chart.
      const Vec2 ev = s1 - s0;
      const double len2 = dot(ev, ev);
      const EdgeRef here{piece.chart, e};
      const EdgeRef there = surface_->partner(here);
      TransversalPiece twin = piece;
      twin.chart = there.polygon;
      twin.edge = there.edge;
      twin.a = surface_->glue_point(here, dot(piece.a - s0, ev) / len2);
      twin.b = surface_->glue_point(here, dot(piece.b - s0, ev) / len2);
      by_chart_[static_cast<std::size_t>(twin.chart)].push_back(twin);
      break;
    }
    by_chart_[static_cast<std::size_t>(piece.chart)].push_back(piece);
  }

  const TranslationSurface* surface_;
  double epsilon_;
  double theta_;
  std::vector<Prong> prongs_;
  std::vector<std::vector<TransversalPiece>> by_chart_;
};

namespace detail {

inline HitResult to_hit_result(const WalkResult& r) {
  switch (r.end) {
    case WalkEnd::Hit: return HitResult::make_hit(r.time);
    case WalkEnd::Censored: return HitResult::censored(r.time);
    case WalkEnd::Vertex: return {HitKind::SingularImpact, r.time};
  }
  return {};
}

inline void check_t_max(double t_max) {
  if (!(t_max > 0.0)) throw Error(ErrorCode::InvalidState, "t_max must be positive");
}

}  // namespace detail

/// First time t >= 0 at which the flow from state enters the closed
/// epsilon-neighbourhood of the cone points. States starting inside it hit at 0.
inline HitResult free_path_circular(const CircularObstacles& obstacles,
                                    const UnitTangentState& state, double t_max) {
  const TranslationSurface& s = obstacles.surface();
  validate_state(s, state);
  detail::check_t_max(t_max);
  auto visit = [&](int chart, Vec2 origin, Vec2 dir, double, double limit) {
    return obstacles.first_entry(chart, origin, dir, limit);
  };
  return detail::to_hit_result(
      walk_ray(s, {state.chart, state.point, state.edge, -1}, direction(state.theta), t_max, visit));
}

inline HitResult free_path_circular(const TranslationSurface& s, double epsilon,
                                    const UnitTangentState& state, double t_max) {
  return free_path_circular(CircularObstacles(s, epsilon), state, t_max);
}

/// First time t >= 0 at which the flow point can be joined to a cone point by
/// a segment perpendicular to theta of length at most epsilon.
inline HitResult free_path_segment(const SegmentObstacles& obstacles,
                                   const UnitTangentState& state, double t_max) {
  const TranslationSurface& s = obstacles.surface();
  validate_state(s, state);
  detail::check_t_max(t_max);
  if (std::abs(std::remainder(state.theta - obstacles.theta(), kTwoPi)) > 1e-12)
    throw Error(ErrorCode::InvalidState, "state direction differs from the obstacle direction");
  auto visit = [&](int chart, Vec2 origin, Vec2 dir, double, double limit) -> std::optional<double> {
    if (const auto c = obstacles.first_crossing(chart, origin, dir, -1e-12, limit)) return c->t;
    return std::nullopt;
  };
  return detail::to_hit_result(
      walk_ray(s, {state.chart, state.point, state.edge, -1}, direction(state.theta), t_max, visit));
}

inline HitResult free_path_segment(const TranslationSurface& s, double epsilon,
                                   const UnitTangentState& state, double t_max,
                                   ProngPolicy policy = ProngPolicy::All) {
  return free_path_segment(SegmentObstacles(s, epsilon, state.theta, policy), state, t_max);
}

}  // namespace flatpath
