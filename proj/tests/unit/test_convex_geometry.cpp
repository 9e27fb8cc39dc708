#include <gtest/gtest.h>

#include "bmstab/error.hpp"
#include "bmstab/harness.hpp"
#include "bmstab/recovery.hpp"
#include "oracles.hpp"

using namespace bmstab;

namespace {

const LatticeSpec kUnit(Rational(1), Rational(1), 1);

ConvexPolygon square(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1) {
  return convex_hull({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

std::vector<oracle::P> to_doubles(const ConvexPolygon& p) {
  std::vector<oracle::P> out;
  for (const Vec2& v : p.vertices) out.push_back({to_double(v.x), to_double(v.y)});
  return out;
}

// M Sigma M^T for the second moments of s.
std::array<Rational, 3> transformed_moments(const GridSet2D& s, const AffineMap2D& m) {
  Moments mo = second_moments(s);
  const auto& l = m.linear();
  Rational xx = l[0][0] * l[0][0] * mo.xx + 2 * l[0][0] * l[0][1] * mo.xy + l[0][1] * l[0][1] * mo.yy;
  Rational xy = l[0][0] * l[1][0] * mo.xx + (l[0][0] * l[1][1] + l[0][1] * l[1][0]) * mo.xy + l[0][1] * l[1][1] * mo.yy;
  Rational yy = l[1][0] * l[1][0] * mo.xx + 2 * l[1][0] * l[1][1] * mo.xy + l[1][1] * l[1][1] * mo.yy;
  return {xx, xy, yy};
}

}  // namespace

TEST(ConvexGeometry, HullOfOneCellIsUnitSquare) {
  ConvexPolygon h = hull(GridSet2D::from_cells(kUnit, {{0, 0}}));
  EXPECT_EQ(h.vertices.size(), 4u);
  EXPECT_EQ(polygon_area(h), 1);
  EXPECT_THROW(hull(GridSet2D(kUnit)), Error);
}

TEST(ConvexGeometry, DiagonalCellsGiveHexagon) {
  GridSet2D d = GridSet2D::from_cells(kUnit, {{0, 0}, {1, 1}, {2, 2}});
  ConvexPolygon h = hull(d);
  EXPECT_EQ(h.vertices.size(), 6u);
  EXPECT_EQ(polygon_area(h), Rational(oracle::hull_area2_gift_wrap(oracle::cell_set(d))) / 2);
  EXPECT_GE(polygon_area(h), measure(d));
}

TEST(ConvexGeometry, HullAreaMatchesGiftWrapOnRandomSets) {
  Rng rng(21);
  for (int k = 0; k < 40; ++k) {
    GridSet2D s = random_grid(rng, kUnit, 14);
    if (s.cell_count() < 2) continue;
    std::set<oracle::Cell> cs = oracle::cell_set(s);
    EXPECT_EQ(polygon_area(hull(s)), Rational(oracle::hull_area2_gift_wrap(cs)) / 2);
    EXPECT_GE(convexity_defect(s), 0);
    EXPECT_EQ(clip_measure(s, hull(s)), measure(s));
  }
}

TEST(ConvexGeometry, HullIsMonotone) {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    GridSet2D s = random_grid(rng, kUnit, 10), extra = random_grid(rng, kUnit, 10);
    GridSet2D big = set_union(s, extra);
    ConvexPolygon hb = hull(big);
    for (const Vec2& v : hull(s).vertices) EXPECT_TRUE(contains(hb, v));
  }
}

TEST(ConvexGeometry, PolygonAreas) {
  EXPECT_EQ(polygon_area(square(Rational(0), Rational(0), Rational(1), Rational(1))), 1);
  ConvexPolygon tri = convex_hull({{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  EXPECT_EQ(polygon_area(tri), Rational(1, 2));
  // Collinear points are merged.
  ConvexPolygon sq = convex_hull({{Rational(0), Rational(0)}, {Rational(1, 2), Rational(0)}, {Rational(1), Rational(0)},
                                  {Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
  EXPECT_EQ(sq.vertices.size(), 4u);
  EXPECT_THROW(convex_hull({{Rational(0), Rational(0)}, {Rational(1), Rational(1)}, {Rational(2), Rational(2)}}), Error);
}

TEST(ConvexGeometry, ConvexityDefect) {
  EXPECT_EQ(convexity_defect(GridSet2D::rectangle(kUnit, 0, 5, 0, 3)), 0);
  // Removing a cell in the middle of the bottom edge keeps the hull.
  GridSet2D bitten = set_difference(GridSet2D::rectangle(kUnit, 0, 5, 0, 3), GridSet2D::from_cells(kUnit, {{2, 0}}));
  EXPECT_EQ(convexity_defect(bitten), 1);
}

TEST(ConvexGeometry, ClipMeasureBasics) {
  LatticeSpec l(Rational(1), Rational(1), 4);
  GridSet2D r = GridSet2D::rectangle(l, 0, 8, 0, 4);  // [0,2] x [0,1]
  EXPECT_EQ(clip_measure(r, square(Rational(-1), Rational(-1), Rational(3), Rational(3))), measure(r));
  EXPECT_EQ(clip_measure(r, square(Rational(5), Rational(5), Rational(6), Rational(6))), 0);
  // Diagonal through the center: half the rectangle by symmetry.
  ConvexPolygon half = convex_hull({{Rational(0), Rational(0)}, {Rational(2), Rational(0)}, {Rational(2), Rational(1)}});
  EXPECT_EQ(clip_measure(r, half), measure(r) / 2);
}

TEST(ConvexGeometry, ClipMeasureMatchesSupersampling) {
  Rng rng(3);
  const LatticeSpec l(Rational(1), Rational(1), 8);
  for (int k = 0; k < 10; ++k) {
    GridSet2D s = random_grid(rng, l, 12);
    ConvexPolygon p = convex_hull({{Rational(uniform_int(rng, 0, 8), 8), Rational(uniform_int(rng, 0, 4), 8)},
                                   {Rational(uniform_int(rng, 10, 16), 8), Rational(uniform_int(rng, 0, 6), 8)},
                                   {Rational(uniform_int(rng, 8, 16), 8), Rational(uniform_int(rng, 10, 16), 8)},
                                   {Rational(uniform_int(rng, 0, 6), 8), Rational(uniform_int(rng, 9, 16), 8)}});
    const double exact = to_double(clip_measure(s, p));
    const double approx = oracle::supersampled_clip(oracle::cell_set(s), 1.0 / 8, 1.0 / 8, to_doubles(p), 64);
    // Per boundary cell the sampling error is at most one sample row of the cell.
    EXPECT_NEAR(exact, approx, 0.02);
  }
}

TEST(ConvexGeometry, DistanceToConvex) {
  ConvexPolygon sq = square(Rational(0), Rational(0), Rational(1), Rational(1));
  GridSet2D inside = GridSet2D::from_cells(kUnit, {{0, 0}});
  EXPECT_EQ(distance_to_convex(inside, sq), 0);
  GridSet2D far = GridSet2D::from_cells(kUnit, {{4, 0}});  // cell [4,5] x [0,1], 3 to the right
  const Rational d = distance_to_convex(far, sq);
  EXPECT_GE(d, 3);
  EXPECT_LE(to_double(d), 3 + std::sqrt(2.0));
  const double ref = std::max({oracle::point_polygon_distance(to_doubles(sq), {5, 0}),
                               oracle::point_polygon_distance(to_doubles(sq), {5, 1})});
  EXPECT_NEAR(to_double(d), ref, 1e-9);
}

TEST(ConvexGeometry, WhiteningOfDiskIsNearIdentity) {
  GeneratedPair g = generate({GeneratorKind::Disk, 64, Rational(0), 1});
  AffineMap2D m = whitening_normalize(g.a);
  EXPECT_EQ(m.det(), 1);
  const auto& l = m.linear();
  EXPECT_NEAR(to_double(l[0][0]), 1, 1e-2);
  EXPECT_NEAR(to_double(l[1][1]), 1, 1e-2);
  EXPECT_NEAR(to_double(l[0][1]), 0, 1e-2);
}

TEST(ConvexGeometry, WhiteningOfThinRectangle) {
  // 4 x 1/4: variances 4/3 and 1/192, so the map is diag(1/4, 4).
  LatticeSpec l(Rational(1), Rational(1), 4);
  AffineMap2D m = whitening_normalize(GridSet2D::rectangle(l, 0, 16, 0, 1));
  EXPECT_EQ(m.linear()[0][0], Rational(1, 4));
  EXPECT_EQ(m.linear()[1][1], Rational(4));
  EXPECT_EQ(m.linear()[0][1], 0);
}

TEST(ConvexGeometry, WhiteningRestoresAxisAlignedMoments) {
  LatticeSpec l(Rational(1), Rational(1), 16);
  GridSet2D s = discrete_shear(GridSet2D::rectangle(l, 0, 32, 0, 8), Rational(2, 3));
  AffineMap2D m = whitening_normalize(s);
  EXPECT_EQ(m.det(), 1);
  auto [xx, xy, yy] = transformed_moments(s, m);
  EXPECT_LE(std::fabs(to_double(xy)) / to_double(xx), 1e-9);
  EXPECT_NEAR(to_double(xx) / to_double(yy), 1, 1e-9);
}

TEST(ConvexGeometry, WhiteningOfEmptySetThrows) {
  try {
    whitening_normalize(GridSet2D(kUnit));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateMoments);
  }
}

TEST(ConvexGeometry, CircumscribedDiskContainsTheDisk) {
  const Rational r(3, 2);
  ConvexPolygon d = circumscribed_disk(r, 16);
  EXPECT_GE(d.vertices.size(), 16u);
  // Every edge line lies at distance exactly r from the origin (exact unit normals).
  const Vec2 o{Rational(0), Rational(0)};
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    const Vec2& a = d.vertices[i];
    const Vec2& b = d.vertices[(i + 1) % d.vertices.size()];
    Rational cr = a.x * b.y - a.y * b.x;
    Rational len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    EXPECT_EQ(cr * cr / len2, r * r);
  }
  EXPECT_EQ(squared_distance(d, o), 0);
  EXPECT_GT(to_double(polygon_area(d)), 3.14159 * 2.25);
}

TEST(ConvexGeometry, CommonBodyOfEqualConvexInputs) {
  GeneratedPair g = generate({GeneratorKind::Ellipse, 24, Rational(0), 5});
  NormalizedPair n;
  n.a = g.a;
  n.b = g.a;
  RecoveryReport r = build_common_body(n, 0);
  EXPECT_EQ(r.shiftU, r.shiftV);
  EXPECT_EQ(r.epsilonA, r.epsilonB);
  EXPECT_EQ(r.rho, 0);
  EXPECT_TRUE(r.containsA && r.containsB);
  // Only the rasterization defect remains.
  EXPECT_EQ(r.epsilonA, convexity_defect(g.a) / measure(g.a));
}

TEST(ConvexGeometry, CommonBodyOfBitePair) {
  GeneratedPair g = generate({GeneratorKind::BitePair, 32, Rational(1, 50), 2});
  RecoveryReport r = recover(g.a, g.b, Rational(1, 2));
  EXPECT_TRUE(r.containsA);
  EXPECT_TRUE(r.containsB);
  EXPECT_EQ(r.insideA, r.measureA);
  EXPECT_GE(r.areaK, max(r.measureA, r.measureB));
  EXPECT_GE(r.epsilonA, 0);
  // The bites and the raster staircase are the only gaps, up to alignment.
  EXPECT_LE(to_double(r.epsilonA), 5 * 0.02 + 2 * to_double(g.rasterDefect));
}

TEST(ConvexGeometry, CommonBodyOfHomotheticPair) {
  GeneratedPair g = generate({GeneratorKind::HomotheticPair, 32, Rational(0), 3});
  RecoveryReport r = recover(g.a, g.b, Rational(1, 2));
  Vec2 offset = centroid(r.normalized.b) - centroid(r.normalized.a);
  EXPECT_EQ(r.shiftV, offset);
  EXPECT_TRUE(r.containsA && r.containsB);
  EXPECT_LT(to_double(r.epsilonA), 0.3);
}

TEST(ConvexGeometry, RefinedAlignmentNeverEnlargesTheHull) {
  GeneratedPair g = generate({GeneratorKind::BitePair, 32, Rational(1, 20), 7});
  NormalizedPair n = normalize_full(g.a, g.b, Rational(1, 2));
  BodyOptions refined;
  refined.alignment = Alignment::Refined;
  RecoveryReport c = build_common_body(n, 0), r = build_common_body(n, 0, refined);
  EXPECT_LE(polygon_area(r.C), polygon_area(c.C));
  EXPECT_EQ(r.centroidOffset, c.shiftV);
}

TEST(ConvexGeometry, OuterParallelBodyContainsSetsAtResidualDistance) {
  LatticeSpec l(Rational(1), Rational(1), 4);
  GridSet2D a = GridSet2D::rectangle(l, 0, 4, 0, 4);
  ConvexPolygon c = convex_hull({{Rational(0), Rational(0)}, {Rational(1, 2), Rational(0)}, {Rational(0), Rational(1, 2)}});
  Rational rho = distance_to_convex(a, c);
  ConvexPolygon k = minkowski_sum(c, circumscribed_disk(rho, 16));
  EXPECT_EQ(clip_measure(a, k), measure(a));
}
