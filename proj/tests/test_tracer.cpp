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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flatpath/flatpath.hpp"
#include "oracles.hpp"

namespace flatpath {
namespace {

UnitTangentState at(double x, double y, double theta) { return {0, {x, y}, theta, -1}; }

TEST(Step, SquareTorusWrapsAround) {
  const auto s = square_torus();
  const auto step = step_across_edge(s, at(0.5, 0.5, 0.0));
  EXPECT_NEAR(step.to.x, 1.0, 1e-15);
  EXPECT_NEAR(step.to.y, 0.5, 1e-15);
  EXPECT_EQ(step.next.chart, 0);
  EXPECT_NEAR(step.next.point.x, 0.0, 1e-15);
  EXPECT_NEAR(step.next.point.y, 0.5, 1e-15);
}

TEST(Step, LShapeFollowsGluingTable) {
  const auto s = l_surface();
  const double k = 1.0 / std::sqrt(3.0);
  // upward through the top of the upper square (edge 5) lands on the bottom
  // of the left square (edge 0)
  auto step = step_across_edge(s, {0, {0.5 * k, 1.5 * k}, kPi / 2, -1});
  EXPECT_EQ(s.partner({0, 5}), (EdgeRef{0, 0}));
  EXPECT_NEAR(step.next.point.x, 0.5 * k, 1e-15);
  EXPECT_NEAR(step.next.point.y, 0.0, 1e-15);
  EXPECT_EQ(step.next.edge, 0);
  // rightward through the right end of the lower row (edge 2) comes back
  // through the left side of the lower-left square (edge 7)
  step = step_across_edge(s, {0, {1.5 * k, 0.5 * k}, 0.0, -1});
  EXPECT_EQ(s.partner({0, 2}), (EdgeRef{0, 7}));
  EXPECT_NEAR(step.next.point.x, 0.0, 1e-15);
  EXPECT_NEAR(step.next.point.y, 0.5 * k, 1e-15);
}

TEST(Step, CornerIsSingular) {
  try {
    step_across_edge(square_torus(), at(0.5, 0.5, kPi / 4));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularImpact);
  }
}

TEST(Circular, Examples) {
  const auto s = square_torus();
  auto r = free_path_circular(s, 0.1, at(0.5, 0.05, 0.0), 100.0);
  ASSERT_TRUE(r.hit());
  EXPECT_NEAR(r.time, 0.5 - std::sqrt(0.01 - 0.0025), 1e-12);

  r = free_path_circular(s, 0.1, at(0.5, 0.5, 0.0), 100.0);
  EXPECT_EQ(r.kind, HitKind::Censored);
  EXPECT_EQ(r.time, 100.0);

  // on the boundary circle, moving tangentially away
  r = free_path_circular(s, 0.1, at(0.1, 0.0, kPi / 2), 100.0);
  ASSERT_TRUE(r.hit());
  EXPECT_EQ(r.time, 0.0);
}

TEST(Circular, RejectsOversizedRadius) {
  try {
    free_path_circular(square_torus(), 0.6, at(0.5, 0.5, 0.0), 1.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidEpsilon);
  }
}

TEST(Segment, Examples) {
  const auto s = square_torus();
  auto r = free_path_segment(s, 0.1, at(0.5, 0.05, 0.0), 100.0);
  ASSERT_TRUE(r.hit());
  EXPECT_NEAR(r.time, 0.5, 1e-12);
  EXPECT_LE(free_path_circular(s, 0.1, at(0.5, 0.05, 0.0), 100.0).time, r.time);

  r = free_path_segment(s, 0.1, at(0.5, 0.5, 0.0), 100.0);
  EXPECT_EQ(r.kind, HitKind::Censored);
  EXPECT_EQ(r.time, 100.0);
}

TEST(Tracer, ClosedGeodesicReturnsAfterUnitTime) {
  const auto s = square_torus();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    const Vec2 p{u(gen), u(gen)};
    auto back_home = [&](int, Vec2 origin, Vec2 dir, double elapsed, double limit) -> std::optional<double> {
      if (std::abs(origin.y - p.y) > 1e-12) return std::nullopt;
      const double t = (p.x - origin.x) / dir.x;
      if (elapsed + t > 1e-9 && t >= 0.0 && t <= limit) return t;
      return std::nullopt;
    };
    const auto r = walk_ray(s, {0, p, -1, -1}, direction(0.0), 5.0, back_home);
    ASSERT_EQ(r.end, WalkEnd::Hit);
    EXPECT_NEAR(r.time, 1.0, 1e-12);
  }
}

TEST(Tracer, TorusTimesMatchLatticeOracle) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  const double t_max = 3.0;
  for (const auto& s : {square_torus(), golden_shear_torus(), torus_from_basis({1.7, 0.2}, {0.4, 0.6})}) {
    const auto L = testing::lattice_of(s);
    const StateSampler sampler(s);
    const double eps = 0.3 * max_circular_epsilon(s);
    int checked = 0;
    for (std::uint64_t i = 0; i < 400; ++i) {
      StreamRng rng(9, i);
      const auto st = sampler(rng);
      const auto c = free_path_circular(s, eps, st, t_max);
      const auto g = free_path_segment(s, eps, st, t_max);
      if (c.kind == HitKind::SingularImpact || g.kind == HitKind::SingularImpact) continue;
      const double c_ref = testing::lattice_circular_time(L, st.point, st.theta, eps);
      const double g_ref = testing::lattice_segment_time(L, st.point, st.theta, eps);
      if (c_ref <= t_max) {
        ASSERT_TRUE(c.hit());
        EXPECT_NEAR(c.time, c_ref, 1e-9);
      } else {
        EXPECT_EQ(c.kind, HitKind::Censored);
      }
      if (g_ref <= t_max) {
        ASSERT_TRUE(g.hit());
        EXPECT_NEAR(g.time, g_ref, 1e-9);
      } else {
        EXPECT_EQ(g.kind, HitKind::Censored);
      }
      ++checked;
    }
    EXPECT_GT(checked, 390);
  }
}

TEST(Tracer, CircularNeverLaterThanSegment) {
  for (const auto& s : {square_torus(), l_surface(), regular_octagon(), l_surface(0.6, 1.4)}) {
    const StateSampler sampler(s);
    const double eps = 0.5 * max_circular_epsilon(s);
    for (std::uint64_t i = 0; i < 2000; ++i) {
      StreamRng rng(21, i);
      const auto st = sampler(rng);
      const auto c = free_path_circular(s, eps, st, 50.0);
      const auto g = free_path_segment(s, eps, st, 50.0);
      if (c.hit() && g.hit()) {
        EXPECT_LE(c.time, g.time + 1e-12);
      }
      if (g.hit() && c.kind != HitKind::SingularImpact) {
        EXPECT_TRUE(c.hit());
      }
    }
  }
}

TEST(Tracer, RotationEquivariance) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (const auto& s : {l_surface(), regular_octagon()}) {
    const StateSampler sampler(s);
    const double eps = 0.5 * max_circular_epsilon(s);
    for (std::uint64_t i = 0; i < 200; ++i) {
      StreamRng rng(31, i);
      const auto st = sampler(rng);
      const double phi = ang(gen);
      const Mat2 r = rotation(phi);
      const auto rs = apply_matrix(r, s);
      const UnitTangentState rst{st.chart, r(st.point), st.theta + phi, -1};
      const auto c0 = free_path_circular(s, eps, st, 20.0), c1 = free_path_circular(rs, eps, rst, 20.0);
      const auto g0 = free_path_segment(s, eps, st, 20.0), g1 = free_path_segment(rs, eps, rst, 20.0);
      if (c0.kind != HitKind::SingularImpact && c1.kind != HitKind::SingularImpact) {
        EXPECT_EQ(c0.kind, c1.kind);
        EXPECT_NEAR(c0.time, c1.time, 1e-9);
      }
      if (g0.kind != HitKind::SingularImpact && g1.kind != HitKind::SingularImpact) {
        EXPECT_EQ(g0.kind, g1.kind);
        EXPECT_NEAR(g0.time, g1.time, 1e-9);
      }
    }
  }
}

TEST(Tracer, Deterministic) {
  const auto s = regular_octagon();
  const StateSampler sampler(s);
  for (std::uint64_t i = 0; i < 50; ++i) {
    StreamRng a(4, i), b(4, i);
    const auto sa = sampler(a), sb = sampler(b);
    const auto x = free_path_segment(s, 0.05, sa, 30.0), y = free_path_segment(s, 0.05, sb, 30.0);
    EXPECT_EQ(x.kind, y.kind);
    EXPECT_EQ(x.time, y.time);
  }
}

TEST(Tracer, RejectsPointsOutsideTheChart) {
  try {
    free_path_circular(square_torus(), 0.1, at(1.5, 0.5, 0.0), 1.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidState);
  }
}

}  // namespace
}  // namespace flatpath
