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
#include <numbers>
#include <optional>

namespace flatpath {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Counterclockwise angle from `from` to `to`, in [0, 2pi).
inline double ccw_angle(Vec2 from, Vec2 to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

// Wraps an angle into [0, 2pi).
inline double wrap_angle(double theta) {
  double a = std::fmod(theta, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  double s = dot(p - a, ab) / len2;
  s = s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
  return distance(p, a + s * ab);
}

/// 2x2 real matrix acting on column vectors.
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  constexpr double det() const { return a * d - b * c; }

  constexpr Vec2 operator()(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;

  static constexpr Mat2 identity() { return {}; }
};

/// Rotation by theta radians counterclockwise.
inline Mat2 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c, -s, s, c};
}

/// Diagonal geodesic-flow element diag(e^t, e^-t).
inline Mat2 diagonal_flow(double t) { return {std::exp(t), 0.0, 0.0, std::exp(-t)}; }

inline Mat2 shear(double s) { return {1.0, s, 0.0, 1.0}; }

/// Matrix taking an (epsilon, theta) segment-obstacle question to the
/// unit-scale question for the downward vertical direction: the rotation
/// sends theta to -pi/2, then horizontal lengths scale by 1/(2 epsilon).
inline Mat2 renormalization_matrix(double epsilon, double theta) {
  return diagonal_flow(std::log(1.0 / (2.0 * epsilon))) * rotation(-kPi / 2.0 - theta);
}

struct RaySegmentHit {
  double t;  // ray parameter
  double s;  // segment parameter in [0, 1]
};

// Intersection of origin + t*dir (t unbounded) with segment a + s*(b - a).
// Returns nullopt for parallel configurations.
inline std::optional<RaySegmentHit> intersect_line_segment(Vec2 origin, Vec2 dir, Vec2 a,
                                                           Vec2 b) {
  const Vec2 ab = b - a;
  const double denom = cross(dir, ab);
  if (std::abs(denom) <= 1e-15 * norm(ab) * norm(dir)) return std::nullopt;
  const Vec2 ao = a - origin;
  return RaySegmentHit{cross(ao, ab) / denom, cross(ao, dir) / denom};
}

// First parameter t >= 0 at which origin + t*dir (dir unit) lies in the
// closed disk of the given radius about center; 0 if origin is already in it
// (boundary included to a relative 1e-12). Tangencies within a relative 1e-9
// of radius^2 count as hits.
inline std::optional<double> ray_disk_entry(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
  const Vec2 f = origin - center;
  const double r2 = radius * radius;
  const double c = dot(f, f) - r2;
  if (c <= 1e-12 * r2) return 0.0;
  const double b = dot(f, dir);
  if (b >= 0.0) return std::nullopt;
  const double disc = b * b - c;
  if (disc < -1e-9 * r2) return std::nullopt;
  const double t = -b - std::sqrt(disc > 0.0 ? disc : 0.0);
  return t < 0.0 ? 0.0 : t;
}

}  // namespace flatpath
