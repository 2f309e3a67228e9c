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

Polygon unit_square() { return Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }

ErrorCode build_error(std::vector<Polygon> polys, std::vector<EdgeGluing> gluings) {
  try {
    build_surface(std::move(polys), std::move(gluings));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "surface was accepted";
  return ErrorCode::Parse;
}

TEST(Surface, SquareTorusHasOneRegularPoint) {
  const auto s = square_torus();
  ASSERT_EQ(s.cone_classes().size(), 1u);
  EXPECT_EQ(s.cone_classes()[0].members.size(), 4u);
  EXPECT_NEAR(cone_angle(s, s.cone_classes()[0]), kTwoPi, 1e-12);
  EXPECT_EQ(s.stratum().alphas, std::vector<int>{0});
  EXPECT_EQ(s.stratum().kappa, 1);
  EXPECT_NEAR(s.total_area(), 1.0, 1e-12);
}

TEST(Surface, LShapeIsOneConePointOfAngleSixPi) {
  const auto s = l_surface();
  ASSERT_EQ(s.cone_classes().size(), 1u);
  // five right angles, two flat corners and one reflex corner
  const double expected = (5 * 90.0 + 2 * 180.0 + 270.0) * kPi / 180.0;
  EXPECT_NEAR(cone_angle(s, s.cone_classes()[0]), expected, 1e-9);
  EXPECT_EQ(s.stratum().alphas, std::vector<int>{2});
  EXPECT_EQ(s.stratum().kappa, 3);
  EXPECT_NEAR(s.total_area(), 1.0, 1e-12);
  // integer L has area 3
  EXPECT_NEAR(norm(s.polygon(0).edge_vector(0)), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Surface, RegularOctagonIsOneConePoint) {
  const auto s = regular_octagon();
  ASSERT_EQ(s.cone_classes().size(), 1u);
  EXPECT_NEAR(cone_angle(s, s.cone_classes()[0]), 8 * 135.0 * kPi / 180.0, 1e-9);
  EXPECT_EQ(s.stratum().kappa, 3);
}

TEST(Surface, AngleSumMatchesKappa) {
  for (const auto& s : {square_torus(), l_surface(), regular_octagon(), golden_shear_torus(),
                        l_surface(0.7, 1.9), torus_from_basis({2, 0}, {0.3, 0.5})}) {
    double total = 0.0;
    int alpha_sum = 0;
    for (const auto& c : s.cone_classes()) {
      total += c.total_angle;
      alpha_sum += c.alpha;
    }
    EXPECT_NEAR(total, kTwoPi * s.stratum().kappa, 1e-7);
    EXPECT_EQ(alpha_sum % 2, 0);
  }
}

TEST(Surface, RejectsNonParallelGluing) {
  std::vector<Polygon> polys{unit_square()};
  EXPECT_EQ(build_error(polys, {{{0, 0}, {0, 1}}, {{0, 2}, {0, 3}}}), ErrorCode::NonParallelEdges);
}

TEST(Surface, RejectsSameDirectionGluing) {
  // a parallelogram edge glued to itself shifted: normals agree
  std::vector<Polygon> polys{unit_square(), Polygon{{{2, 0}, {3, 0}, {3, 1}, {2, 1}}}};
  EXPECT_EQ(build_error(polys, {{{0, 0}, {1, 0}}, {{0, 2}, {1, 2}}, {{0, 1}, {0, 3}}, {{1, 1}, {1, 3}}}),
            ErrorCode::NonParallelEdges);
}

TEST(Surface, RejectsLengthMismatch) {
  std::vector<Polygon> polys{Polygon{{{0, 0}, {2, 0}, {2, 1}, {0, 1}}}, unit_square()};
  EXPECT_EQ(build_error(polys, {{{0, 0}, {1, 2}}, {{0, 2}, {1, 0}}, {{0, 1}, {0, 3}}, {{1, 1}, {1, 3}}}),
            ErrorCode::LengthMismatch);
}

TEST(Surface, RejectsUnpairedAndSelfGluedEdges) {
  std::vector<Polygon> polys{unit_square()};
  EXPECT_EQ(build_error(polys, {{{0, 0}, {0, 2}}}), ErrorCode::UnpairedEdge);
  EXPECT_EQ(build_error(polys, {{{0, 0}, {0, 0}}, {{0, 1}, {0, 3}}}), ErrorCode::UnpairedEdge);
  EXPECT_EQ(build_error(polys, {{{0, 0}, {0, 2}}, {{0, 2}, {0, 0}}, {{0, 1}, {0, 3}}}),
            ErrorCode::UnpairedEdge);
}

TEST(Surface, RejectsBadPolygons) {
  EXPECT_EQ(build_error({Polygon{{{0, 0}, {1, 0}}}}, {}), ErrorCode::InvalidPolygon);
  // clockwise
  EXPECT_EQ(build_error({Polygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}}, {}), ErrorCode::InvalidPolygon);
  // bow tie
  EXPECT_EQ(build_error({Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}}, {}), ErrorCode::InvalidPolygon);
}

TEST(Surface, TwoChartTorusHasOnlyRegularPoints) {
  std::vector<Polygon> polys{unit_square(), Polygon{{{0, 0}, {1, 0}, {1.5, 1}, {0.5, 1}}}};
  const auto s =
      build_surface(polys, {{{0, 0}, {1, 2}}, {{0, 2}, {1, 0}}, {{0, 1}, {0, 3}}, {{1, 1}, {1, 3}}});
  for (const auto& c : s.cone_classes()) EXPECT_EQ(c.alpha, 0);
  EXPECT_EQ(s.stratum().kappa, static_cast<int>(s.cone_classes().size()));
  EXPECT_NEAR(s.total_area(), 1.0, 1e-12);
}

TEST(Surface, ApplyMatrixExamples) {
  const auto s = square_torus();
  const auto same = apply_matrix(Mat2::identity(), s);
  EXPECT_EQ(same.polygon(0).vertices, s.polygon(0).vertices);

  const auto stretched = apply_matrix(diagonal_flow(std::log(2.0)), s);
  EXPECT_NEAR(stretched.polygon(0).edge_vector(0).x, 2.0, 1e-12);
  EXPECT_NEAR(stretched.polygon(0).edge_vector(1).y, 0.5, 1e-12);
  EXPECT_NEAR(stretched.total_area(), 1.0, 1e-12);

  const auto turned = apply_matrix(rotation(kPi / 2), s);
  EXPECT_EQ(turned.stratum(), s.stratum());
  EXPECT_NEAR(turned.polygon(0).vertex(1).x, 0.0, 1e-12);
  EXPECT_NEAR(turned.polygon(0).vertex(1).y, 1.0, 1e-12);

  try {
    apply_matrix(Mat2{2, 0, 0, 1}, s);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateMatrix);
  }
}

TEST(Surface, ApplyMatrixComposesAndPreservesInvariants) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), tt(-1.0, 1.0);
  for (const auto& s : {l_surface(), regular_octagon(), golden_shear_torus()}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Mat2 g1 = rotation(ang(gen)) * diagonal_flow(tt(gen));
      const Mat2 g2 = shear(tt(gen)) * rotation(ang(gen));
      const auto a = apply_matrix(g2, apply_matrix(g1, s));
      const auto b = apply_matrix(g2 * g1, s);
      for (int p = 0; p < s.polygon_count(); ++p)
        for (int v = 0; v < s.polygon(p).size(); ++v)
          EXPECT_LT(distance(a.polygon(p).vertex(v), b.polygon(p).vertex(v)), 1e-12);
      EXPECT_NEAR(a.total_area(), 1.0, 1e-12);
      EXPECT_EQ(a.stratum(), s.stratum());
    }
  }
}

TEST(Surface, RebuildIsIdempotent) {
  for (const auto& s : {l_surface(), regular_octagon(), l_surface(1.3, 0.4)}) {
    const auto again = build_surface(s.polygons(), s.gluings());
    ASSERT_EQ(again.cone_classes().size(), s.cone_classes().size());
    for (std::size_t i = 0; i < s.cone_classes().size(); ++i) {
      EXPECT_EQ(again.cone_classes()[i].members, s.cone_classes()[i].members);
      EXPECT_EQ(again.cone_classes()[i].alpha, s.cone_classes()[i].alpha);
    }
    EXPECT_EQ(again.stratum(), s.stratum());
  }
}

TEST(Matrices, RenormalizationExamples) {
  auto near = [](const Mat2& a, const Mat2& b) {
    return std::abs(a.a - b.a) < 1e-12 && std::abs(a.b - b.b) < 1e-12 &&
           std::abs(a.c - b.c) < 1e-12 && std::abs(a.d - b.d) < 1e-12;
  };
  EXPECT_TRUE(near(renormalization_matrix(0.5, -kPi / 2), Mat2::identity()));
  EXPECT_TRUE(near(renormalization_matrix(0.25, -kPi / 2), Mat2{2, 0, 0, 0.5}));
  EXPECT_TRUE(near(renormalization_matrix(0.5, 0.0), rotation(-kPi / 2)));
  // g maps theta to straight down
  for (double th : {0.1, 1.0, 2.5, 4.0}) {
    const Vec2 w = renormalization_matrix(0.1, th)(direction(th));
    EXPECT_NEAR(w.x, 0.0, 1e-12);
    EXPECT_LT(w.y, 0.0);
  }
}

TEST(Separation, Examples) {
  EXPECT_NEAR(shortest_singularity_separation(square_torus(), 2.0), 1.0, 1e-12);
  EXPECT_NEAR(shortest_singularity_separation(l_surface(), 2.0), 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(shortest_singularity_separation(regular_octagon()),
              1.0 / std::sqrt(2.0 * (1.0 + std::sqrt(2.0))), 1e-12);
  try {
    shortest_singularity_separation(square_torus(), 0.1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFoundWithinBound);
  }
}

TEST(Separation, TorusMatchesShortestLatticeVector) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> len(0.6, 2.5), off(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = len(gen);
    const auto s = torus_from_basis({a, 0.0}, {off(gen), 1.0 / a});
    const auto L = testing::lattice_of(s);
    double shortest = INFINITY;
    testing::for_lattice_points(L, 30, [&](Vec2 w) {
      if (norm(w) > 1e-9) shortest = std::min(shortest, norm(w));
    });
    EXPECT_NEAR(shortest_singularity_separation(s, 3.0), shortest, 1e-9) << "trial " << trial;
  }
}

}  // namespace
}  // namespace flatpath
