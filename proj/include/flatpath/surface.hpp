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
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"

namespace flatpath {

/// Relative tolerance for edge parallelism and length checks.
inline constexpr double kGluingTolerance = 1e-9;
/// Absolute tolerance (radians) for cone angles being multiples of 2pi.
inline constexpr double kAngleTolerance = 1e-7;

struct EdgeRef {
  int polygon = 0;
  int edge = 0;
  friend constexpr auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct Corner {
  int polygon = 0;
  int vertex = 0;
  friend constexpr auto operator<=>(const Corner&, const Corner&) = default;
};

inline std::string describe(EdgeRef e) {
  return "edge " + std::to_string(e.edge) + " of polygon " + std::to_string(e.polygon);
}

/// Simple polygon with counterclockwise vertices. Edge i runs from vertex i
/// to vertex i+1 (cyclically).
struct Polygon {
  std::vector<Vec2> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
  Vec2 vertex(int i) const {
    const int n = size();
    return vertices[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  Vec2 edge_start(int e) const { return vertex(e); }
  Vec2 edge_end(int e) const { return vertex(e + 1); }
  Vec2 edge_vector(int e) const { return vertex(e + 1) - vertex(e); }

  double signed_area() const {
    double a = 0.0;
    for (int i = 0; i < size(); ++i) a += cross(vertex(i), vertex(i + 1));
    return 0.5 * a;
  }

  /// Interior angle at vertex i, in (0, 2pi).
  double interior_angle(int i) const {
    return ccw_angle(vertex(i + 1) - vertex(i), vertex(i - 1) - vertex(i));
  }

  /// Outward unit normal of edge e.
  Vec2 outward_normal(int e) const {
    const Vec2 v = edge_vector(e);
    const double l = norm(v);
    return {v.y / l, -v.x / l};
  }

  bool contains(Vec2 p, double tol = 1e-12) const;
};

// Point-in-polygon with a boundary band of width tol counted as inside.
inline bool Polygon::contains(Vec2 p, double tol) const {
  bool inside = false;
  for (int i = 0; i < size(); ++i) {
    const Vec2 a = vertex(i), b = vertex(i + 1);
    if (point_segment_distance(p, a, b) <= tol) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

struct EdgeGluing {
  EdgeRef a;
  EdgeRef b;
};

/// Equivalence class of polygon corners forming one point of the surface.
struct ConePointClass {
  std::vector<Corner> members;
  double total_angle = 0.0;
  int alpha = 0;  // total_angle = 2 pi (alpha + 1)
};

struct StratumInfo {
  std::vector<int> alphas;  // sorted ascending
  int kappa = 0;            // sum of (alpha + 1)
  friend bool operator==(const StratumInfo&, const StratumInfo&) = default;
};

/// A translation surface given by polygons with edges identified in pairs
/// by translations. Immutable once built; obtain one via build_surface,
/// apply_matrix, or a builtin constructor.
class TranslationSurface {
 public:
  const std::vector<Polygon>& polygons() const { return polygons_; }
  const Polygon& polygon(int i) const { return polygons_[static_cast<std::size_t>(i)]; }
  int polygon_count() const { return static_cast<int>(polygons_.size()); }
  const std::vector<EdgeGluing>& gluings() const { return gluings_; }
  const std::vector<ConePointClass>& cone_classes() const { return classes_; }
  const StratumInfo& stratum() const { return stratum_; }
  double total_area() const { return total_area_; }

  /// Edge glued to e.
  EdgeRef partner(EdgeRef e) const { return partner_[offset_[e.polygon] + e.edge]; }
  /// Index into cone_classes() of the class containing a corner.
  int class_of(Corner c) const { return class_of_[offset_[c.polygon] + c.vertex]; }

  /// Maps a point at parameter s along edge e (from its start vertex) to the
  /// identified point on the partner edge.
  Vec2 glue_point(EdgeRef e, double s) const {
    const EdgeRef f = partner(e);
    const Polygon& q = polygon(f.polygon);
    // Partner edge runs in the opposite direction.
    return q.edge_end(f.edge) + s * (q.edge_start(f.edge) - q.edge_end(f.edge));
  }

 private:
  friend TranslationSurface build_surface(std::vector<Polygon>, std::vector<EdgeGluing>);
  friend TranslationSurface apply_matrix(const Mat2&, const TranslationSurface&);

  void derive();

  std::vector<Polygon> polygons_;
  std::vector<EdgeGluing> gluings_;
  std::vector<ConePointClass> classes_;
  StratumInfo stratum_;
  double total_area_ = 0.0;
  std::vector<int> offset_;
  std::vector<EdgeRef> partner_;
  std::vector<int> class_of_;
};

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c, double tol) {
  const double v = cross(b - a, c - a);
  return v > tol ? 1 : (v < -tol ? -1 : 0);
}

inline bool on_segment(Vec2 p, Vec2 a, Vec2 b, double tol) {
  return point_segment_distance(p, a, b) <= tol;
}

inline bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol) {
  const int o1 = orientation(a, b, c, tol * tol), o2 = orientation(a, b, d, tol * tol);
  const int o3 = orientation(c, d, a, tol * tol), o4 = orientation(c, d, b, tol * tol);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(c, a, b, tol) || on_segment(d, a, b, tol) || on_segment(a, c, d, tol) ||
         on_segment(b, c, d, tol);
}

inline void validate_polygon(const Polygon& p, int index) {
  const std::string name = "polygon " + std::to_string(index);
  if (p.size() < 3) throw Error(ErrorCode::InvalidPolygon, name + " has fewer than 3 vertices");
  if (!(p.signed_area() > 0.0))
    throw Error(ErrorCode::InvalidPolygon, name + " is not counterclockwise with positive area");
  double scale = 0.0;
  for (int i = 0; i < p.size(); ++i) scale = std::max(scale, norm(p.edge_vector(i)));
  const double tol = 1e-12 * scale;
  for (int i = 0; i < p.size(); ++i) {
    if (norm(p.edge_vector(i)) <= tol)
      throw Error(ErrorCode::InvalidPolygon, name + " has a zero-length edge " + std::to_string(i));
    const double ang = p.interior_angle(i);
    if (ang < 1e-12 || ang > kTwoPi - 1e-12)
      throw Error(ErrorCode::InvalidPolygon, name + " folds back at vertex " + std::to_string(i));
  }
  const int n = p.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (segments_touch(p.edge_start(i), p.edge_end(i), p.edge_start(j), p.edge_end(j), tol))
        throw Error(ErrorCode::InvalidPolygon, name + " is not simple (edges " +
                                                   std::to_string(i) + " and " +
                                                   std::to_string(j) + " meet)");
    }
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace detail

// Builds the edge partner table, validates gluings, and derives cone classes.
inline void TranslationSurface::derive() {
  const int np = polygon_count();
  offset_.assign(static_cast<std::size_t>(np) + 1, 0);
  for (int i = 0; i < np; ++i) offset_[i + 1] = offset_[i] + polygon(i).size();
  const auto total = static_cast<std::size_t>(offset_.back());

  auto slot = [&](EdgeRef e) { return static_cast<std::size_t>(offset_[e.polygon] + e.edge); };
  auto check_ref = [&](EdgeRef e) {
    if (e.polygon < 0 || e.polygon >= np || e.edge < 0 || e.edge >= polygon(e.polygon).size())
      throw Error(ErrorCode::UnpairedEdge, "gluing references nonexistent " + describe(e));
  };

  partner_.assign(total, EdgeRef{-1, -1});
  for (const auto& g : gluings_) {
    check_ref(g.a);
    check_ref(g.b);
    if (g.a == g.b) throw Error(ErrorCode::UnpairedEdge, describe(g.a) + " is glued to itself");
    for (EdgeRef e : {g.a, g.b}) {
      if (partner_[slot(e)].polygon != -1)
        throw Error(ErrorCode::UnpairedEdge, describe(e) + " appears in more than one gluing");
    }
    const Vec2 va = polygon(g.a.polygon).edge_vector(g.a.edge);
    const Vec2 vb = polygon(g.b.polygon).edge_vector(g.b.edge);
    const double la = norm(va), lb = norm(vb);
    if (std::abs(cross(va, vb)) > kGluingTolerance * la * lb || dot(va, vb) >= 0.0)
      throw Error(ErrorCode::NonParallelEdges,
                  describe(g.a) + " and " + describe(g.b) +
                      " are not parallel with opposite outward normals");
    if (std::abs(la - lb) > kGluingTolerance * std::max(la, lb))
      throw Error(ErrorCode::LengthMismatch,
                  describe(g.a) + " and " + describe(g.b) + " differ in length");
    partner_[slot(g.a)] = g.b;
    partner_[slot(g.b)] = g.a;
  }
  for (int p = 0; p < np; ++p) {
    for (int e = 0; e < polygon(p).size(); ++e) {
      if (partner_[slot({p, e})].polygon == -1)
        throw Error(ErrorCode::UnpairedEdge, describe({p, e}) + " is not glued");
    }
  }

  // Corner (P, i) is the start of edge i; gluing edge a to b identifies the
  // start of a with the end of b and vice versa.
  detail::UnionFind uf(total);
  auto corner_slot = [&](int p, int v) {
    const int n = polygon(p).size();
    return offset_[p] + ((v % n) + n) % n;
  };
  for (const auto& g : gluings_) {
    uf.unite(corner_slot(g.a.polygon, g.a.edge), corner_slot(g.b.polygon, g.b.edge + 1));
    uf.unite(corner_slot(g.a.polygon, g.a.edge + 1), corner_slot(g.b.polygon, g.b.edge));
  }

  classes_.clear();
  class_of_.assign(total, -1);
  std::vector<int> root_to_class(total, -1);
  for (int p = 0; p < np; ++p) {
    for (int v = 0; v < polygon(p).size(); ++v) {
      const int root = uf.find(corner_slot(p, v));
      int& cls = root_to_class[static_cast<std::size_t>(root)];
      if (cls == -1) {
        cls = static_cast<int>(classes_.size());
        classes_.emplace_back();
      }
      class_of_[static_cast<std::size_t>(corner_slot(p, v))] = cls;
      auto& c = classes_[static_cast<std::size_t>(cls)];
      c.members.push_back({p, v});
      c.total_angle += polygon(p).interior_angle(v);
    }
  }

  stratum_ = {};
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    auto& c = classes_[i];
    const double multiple = c.total_angle / kTwoPi;
    const double rounded = std::round(multiple);
    if (rounded < 1.0 || std::abs(c.total_angle - rounded * kTwoPi) > kAngleTolerance) {
      std::ostringstream msg;
      msg << "cone class " << i << " (containing corner " << c.members.front().vertex
          << " of polygon " << c.members.front().polygon << ") has total angle "
          << c.total_angle << " rad";
      throw Error(ErrorCode::AngleNotMultipleOf2Pi, msg.str());
    }
    c.alpha = static_cast<int>(rounded) - 1;
    stratum_.alphas.push_back(c.alpha);
    stratum_.kappa += c.alpha + 1;
  }
  std::sort(stratum_.alphas.begin(), stratum_.alphas.end());

  total_area_ = 0.0;
  for (const auto& poly : polygons_) total_area_ += poly.signed_area();
}

/// Validates polygons and gluings, derives cone-point classes, and rescales
/// uniformly to unit total area.
inline TranslationSurface build_surface(std::vector<Polygon> polygons,
                                        std::vector<EdgeGluing> gluings) {
  if (polygons.empty()) throw Error(ErrorCode::InvalidPolygon, "surface has no polygons");
  for (std::size_t i = 0; i < polygons.size(); ++i)
    detail::validate_polygon(polygons[i], static_cast<int>(i));

  TranslationSurface s;
  s.polygons_ = std::move(polygons);
  s.gluings_ = std::move(gluings);
  s.derive();

  const double scale = 1.0 / std::sqrt(s.total_area_);
  for (auto& poly : s.polygons_)
    for (auto& v : poly.vertices) v *= scale;
  s.total_area_ = 0.0;
  for (const auto& poly : s.polygons_) s.total_area_ += poly.signed_area();
  return s;
}

/// Cone angle of a class: the sum of interior angles at its member corners.
inline double cone_angle(const TranslationSurface& s, const ConePointClass& c) {
  double total = 0.0;
  for (const Corner& m : c.members) total += s.polygon(m.polygon).interior_angle(m.vertex);
  return total;
}

/// Image of a surface under an SL(2,R) element. Gluing data is unchanged.
inline TranslationSurface apply_matrix(const Mat2& g, const TranslationSurface& s) {
  if (std::abs(g.det() - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "matrix determinant " << g.det() << " is not 1";
    throw Error(ErrorCode::DegenerateMatrix, msg.str());
  }
  TranslationSurface out;
  out.polygons_ = s.polygons_;
  for (auto& poly : out.polygons_)
    for (auto& v : poly.vertices) v = g(v);
  out.gluings_ = s.gluings_;
  out.derive();
  return out;
}

/// Smallest distance from a polygon vertex to an edge of the same polygon not
/// incident to it, over all charts.
inline double chart_feature_size(const TranslationSurface& s) {
  double best = INFINITY;
  for (const auto& p : s.polygons()) {
    const int n = p.size();
    for (int v = 0; v < n; ++v) {
      for (int e = 0; e < n; ++e) {
        if (e == v || (e + 1) % n == v) continue;
        best = std::min(best, point_segment_distance(p.vertex(v), p.edge_start(e), p.edge_end(e)));
      }
    }
  }
  return best;
}

// Builtin surfaces. Each is validated and has unit area.

inline TranslationSurface square_torus() {
  Polygon sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  return build_surface({sq}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}});
}

/// Torus spanned by u and v (any orientation; swapped to make a positive basis).
inline TranslationSurface torus_from_basis(Vec2 u, Vec2 v) {
  if (cross(u, v) < 0.0) std::swap(u, v);
  Polygon p{{{0, 0}, u, u + v, v}};
  return build_surface({p}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}});
}

/// Torus from the square by the horizontal shear with the golden-ratio
/// conjugate (sqrt(5) - 1) / 2.
inline TranslationSurface golden_shear_torus() {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  return torus_from_basis({1, 0}, {g, 1});
}

/// L-shaped surface: a unit square with a horizontal arm of length a and a
/// vertical arm of length b. The two flat corners where the arms meet the
/// square are kept as polygon vertices so every gluing pairs whole edges.
/// l_surface(1, 1) lies in the stratum with a single 6pi cone point.
inline TranslationSurface l_surface(double a = 1.0, double b = 1.0) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error(ErrorCode::InvalidPolygon, "l_surface arm lengths must be positive");
  Polygon p{{{0, 0}, {1, 0}, {1 + a, 0}, {1 + a, 1}, {1, 1}, {1, 1 + b}, {0, 1 + b}, {0, 1}}};
  return build_surface({p}, {{{0, 0}, {0, 5}}, {{0, 1}, {0, 3}}, {{0, 2}, {0, 7}}, {{0, 4}, {0, 6}}});
}

/// Regular octagon with opposite sides glued.
inline TranslationSurface regular_octagon() {
  Polygon p;
  for (int k = 0; k < 8; ++k) {
    const double a = kPi / 8.0 + k * kPi / 4.0 - kPi / 2.0;
    p.vertices.push_back({std::cos(a), std::sin(a)});
  }
  std::vector<EdgeGluing> g;
  for (int e = 0; e < 4; ++e) g.push_back({{0, e}, {0, e + 4}});
  return build_surface({p}, g);
}

}  // namespace flatpath
