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

// Brute-force references for flat tori: the surface is the plane modulo the
// lattice spanned by u and v, with the single cone point at lattice points.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "flatpath/flatpath.hpp"

namespace flatpath::testing {

struct Lattice {
  Vec2 u, v;
};

// Basis read off a torus_from_basis chart: vertices 0, u, u+v, v.
inline Lattice lattice_of(const TranslationSurface& s) {
  const Polygon& p = s.polygon(0);
  return {p.vertex(1) - p.vertex(0), p.vertex(3) - p.vertex(0)};
}

template <class F>
void for_lattice_points(const Lattice& L, int range, F&& f) {
  for (int m = -range; m <= range; ++m)
    for (int n = -range; n <= range; ++n) f(static_cast<double>(m) * L.u + static_cast<double>(n) * L.v);
}

// First entry into the closed disks of radius eps around lattice points.
inline double lattice_circular_time(const Lattice& L, Vec2 p, double theta, double eps, int range = 40) {
  const Vec2 d = direction(theta);
  double best = std::numeric_limits<double>::infinity();
  for_lattice_points(L, range, [&](Vec2 c) {
    const Vec2 w = c - p;
    if (norm(w) <= eps) {
      best = 0.0;
      return;
    }
    const double along = dot(w, d), perp = cross(d, w);
    if (along < 0.0 || std::abs(perp) > eps) return;
    best = std::min(best, along - std::sqrt(eps * eps - perp * perp));
  });
  return best;
}

// First crossing of a segment of half-length eps through a lattice point,
// perpendicular to the direction of travel.
inline double lattice_segment_time(const Lattice& L, Vec2 p, double theta, double eps, int range = 40) {
  const Vec2 d = direction(theta);
  double best = std::numeric_limits<double>::infinity();
  for_lattice_points(L, range, [&](Vec2 c) {
    const Vec2 w = c - p;
    const double along = dot(w, d), perp = cross(d, w);
    if (along >= 0.0 && std::abs(perp) <= eps) best = std::min(best, along);
  });
  return best;
}

// Torus with a horizontal side of length len: downward return time of the
// point at horizontal offset x on the transversal [-half, half] through the
// lattice point.
inline double torus_return_height(double len, Vec2 v, double x, double half, int max_turns = 100000) {
  for (int k = 1; k <= max_turns; ++k) {
    double y = std::fmod(x + k * v.x + half, len);
    if (y < 0.0) y += len;
    if (y - half <= half && y - half >= -half) return k * v.y;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace flatpath::testing
