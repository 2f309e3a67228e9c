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
#include <array>
#include <cmath>
#include <vector>

#include "flatpath/error.hpp"
#include "flatpath/geometry.hpp"
#include "flatpath/rng.hpp"
#include "flatpath/surface.hpp"
#include "flatpath/tracer.hpp"

namespace flatpath {

/// Ear-clipping triangulation of a simple counterclockwise polygon. Flat
/// (angle pi) vertices are clipped as zero-area ears once no proper ear is left.
inline std::vector<std::array<Vec2, 3>> triangulate(const Polygon& poly) {
  std::vector<Vec2> ring = poly.vertices;
  std::vector<std::array<Vec2, 3>> out;
  auto inside = [](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
  };
  while (ring.size() > 3) {
    const std::size_t n = ring.size();
    std::size_t ear = n;
    for (std::size_t i = 0; i < n && ear == n; ++i) {
      const Vec2 a = ring[(i + n - 1) % n], b = ring[i], c = ring[(i + 1) % n];
      if (cross(b - a, c - b) <= 0.0) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        const Vec2 p = ring[j];
        if (p == a || p == b || p == c) continue;
        blocked = inside(p, a, b, c);
      }
      if (!blocked) ear = i;
    }
    if (ear == n) {
      // Only flat or reflex vertices left: drop a flat one.
      for (std::size_t i = 0; i < n && ear == n; ++i) {
        const Vec2 a = ring[(i + n - 1) % n], b = ring[i], c = ring[(i + 1) % n];
        if (std::abs(cross(b - a, c - b)) <= 1e-14 * norm(b - a) * norm(c - b)) ear = i;
      }
      if (ear == n) throw Error(ErrorCode::InvalidPolygon, "triangulation failed");
    }
    const std::size_t n2 = ring.size();
    const std::array<Vec2, 3> tri{ring[(ear + n2 - 1) % n2], ring[ear], ring[(ear + 1) % n2]};
    if (cross(tri[1] - tri[0], tri[2] - tri[0]) > 0.0) out.push_back(tri);
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(ear));
  }
  out.push_back({ring[0], ring[1], ring[2]});
  return out;
}

/// Draws points uniformly with respect to area, and directions uniformly.
class StateSampler {
 public:
  explicit StateSampler(const TranslationSurface& s) {
    double total = 0.0;
    for (int p = 0; p < s.polygon_count(); ++p) {
      for (const auto& tri : triangulate(s.polygon(p))) {
        const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
        if (!(area > 0.0)) continue;
        total += area;
        triangles_.push_back({p, tri});
        cumulative_.push_back(total);
      }
    }
    for (double& c : cumulative_) c /= total;
  }

  /// Uniform point and uniform direction in [0, 2pi).
  UnitTangentState operator()(StreamRng& rng) const {
    UnitTangentState st = point(rng);
    st.theta = kTwoPi * rng.uniform();
    return st;
  }

  /// Uniform point, theta left at 0.
  UnitTangentState point(StreamRng& rng) const {
    const double pick = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
    if (it == cumulative_.end()) --it;
    const auto& t = triangles_[static_cast<std::size_t>(it - cumulative_.begin())];
    double r1 = rng.uniform(), r2 = rng.uniform();
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    const Vec2 p = t.vertices[0] + r1 * (t.vertices[1] - t.vertices[0]) +
                   r2 * (t.vertices[2] - t.vertices[0]);
    return {t.chart, p, 0.0, -1};
  }

 private:
  struct Triangle {
    int chart;
    std::array<Vec2, 3> vertices;
  };
  std::vector<Triangle> triangles_;
  std::vector<double> cumulative_;
};

/// One uniformly distributed unit tangent state.
inline UnitTangentState sample_uniform_state(const TranslationSurface& s, StreamRng& rng) {
  return StateSampler(s)(rng);
}

}  // namespace flatpath
