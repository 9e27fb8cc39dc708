#include <gtest/gtest.h>

#include <sstream>

#include "bmstab/affine.hpp"
#include "bmstab/error.hpp"
#include "bmstab/grid_io.hpp"
#include "bmstab/lattice.hpp"
#include "oracles.hpp"

using namespace bmstab;

namespace {
const LatticeSpec kUnit(Rational(1), Rational(1), 1);
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rational, RoundingModesDifferOnTies) {
  EXPECT_EQ(round_half_up(Rational(5, 2)), 3);
  EXPECT_EQ(round_half_down(Rational(5, 2)), 2);
  EXPECT_EQ(round_half_up(Rational(-5, 2)), -2);
  EXPECT_EQ(round_half_down(Rational(-5, 2)), -3);
  EXPECT_EQ(floor_to_i64(Rational(-1, 3)), -1);
  EXPECT_EQ(ceil_to_i64(Rational(-1, 3)), 0);
}

TEST(Rational, ApproximationsRespectTolerance) {
  Rational r = approximate(3.141592653589793, 1e-6);
  EXPECT_LE(std::fabs(to_double(r) - 3.141592653589793), 1e-6);
  Rational up = approximate_above(std::sqrt(2.0), 1e-9);
  EXPECT_GE(up * up, Rational(2));
  EXPECT_EQ(*exact_sqrt(Rational(9, 16)), Rational(3, 4));
  EXPECT_FALSE(exact_sqrt(Rational(2)).has_value());
  EXPECT_EQ(to_string(Rational(2), true), "2/1");
}

TEST(Lattice, RunsNormalizeAndMerge) {
  std::vector<bmstab::Run> runs{{5, 7}, {0, 2}, {2, 3}, {6, 9}, {4, 4}};
  normalize_runs(runs);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0], (bmstab::Run{0, 3}));
  EXPECT_EQ(runs[1], (bmstab::Run{5, 9}));
}

TEST(Lattice, RectangleMeasureAndBounds) {
  LatticeSpec l(Rational(2), Rational(1, 2), 4);
  GridSet2D r = GridSet2D::rectangle(l, 0, 4, 0, 4);
  EXPECT_EQ(measure(r), Rational(1));
  EXPECT_EQ(r.cell_count(), 16);
  GridSet2D::Box b = r.bounds();
  EXPECT_EQ(b.i1 - b.i0, 4);
  EXPECT_EQ(slice(r, 2).length(), Rational(1, 2));
  EXPECT_EQ(project_x(r).length(), Rational(2));
}

TEST(Lattice, SetAlgebraMatchesCellSets) {
  GridSet2D a = GridSet2D::rectangle(kUnit, 0, 3, 0, 3);
  GridSet2D b = GridSet2D::rectangle(kUnit, 2, 5, 1, 2);
  std::set<oracle::Cell> ca = oracle::cell_set(a), cb = oracle::cell_set(b);
  std::set<oracle::Cell> u = ca, i, d;
  u.insert(cb.begin(), cb.end());
  std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(i, i.begin()));
  std::set_difference(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(d, d.begin()));
  EXPECT_EQ(oracle::cell_set(set_union(a, b)), u);
  EXPECT_EQ(oracle::cell_set(set_intersection(a, b)), i);
  EXPECT_EQ(oracle::cell_set(set_difference(a, b)), d);
  EXPECT_TRUE(is_subset(set_intersection(a, b), a));
  EXPECT_FALSE(is_subset(b, a));
}

TEST(Lattice, Rotate90FourTimesIsIdentity) {
  GridSet2D s = GridSet2D::from_cells(kUnit, {{0, 0}, {1, 0}, {1, 1}, {3, 2}});
  GridSet2D r = rotate90(rotate90(rotate90(rotate90(s))));
  EXPECT_EQ(r, s);
  EXPECT_EQ(measure(rotate90(s)), measure(s));
  // (x, y) -> (-y, x): cell (3, 2) goes to (-3, 3).
  EXPECT_TRUE(rotate90(s).contains(-3, 3));
}

TEST(Lattice, DiscreteShearPreservesMeasureAndColumns) {
  LatticeSpec l(Rational(1), Rational(1), 8);
  GridSet2D s = GridSet2D::rectangle(l, 0, 8, 0, 4);
  GridSet2D sh = discrete_shear(s, Rational(1, 2));
  EXPECT_EQ(measure(sh), measure(s));
  for (std::int64_t i = 0; i < 8; ++i) {
    EXPECT_EQ(slice(sh, i).length(), slice(s, i).length());
    EXPECT_EQ(slice(sh, i).inf_index(), shear_offset(l, Rational(1, 2), i));
  }
}

TEST(Lattice, AnisotropicScaleKeepsCells) {
  GridSet2D s = GridSet2D::rectangle(kUnit, 0, 2, 0, 3);
  GridSet2D t = anisotropic_scale(s, Rational(2));
  EXPECT_EQ(measure(t), measure(s));
  EXPECT_EQ(t.lattice().hx, Rational(2));
  EXPECT_EQ(t.lattice().hy, Rational(1, 2));
}

TEST(GridIo, RoundTripsThroughText) {
  LatticeSpec l(Rational(3, 2), Rational(2, 3), 5);
  GridSet2D s = GridSet2D::from_cells(l, {{-2, -1}, {-1, -1}, {4, -1}, {0, 3}});
  EXPECT_EQ(from_bmgrid(to_bmgrid(s)), s);
  EXPECT_THROW(from_bmgrid("BMGRID 2\n1/1 1/1 1\n"), Error);
  EXPECT_THROW(from_bmgrid("BMGRID 1\n1/1 1/1 1\n0: 3..1\n"), Error);
}

TEST(Affine, UnimodularMapsCompose) {
  AffineMap2D sh = AffineMap2D::shear_y(Rational(3, 7));
  AffineMap2D d = AffineMap2D::diagonal(Rational(2), Rational(1, 2));
  AffineMap2D c = d.after(sh);
  EXPECT_EQ(c.det(), Rational(1));
  Vec2 p{Rational(1), Rational(2)};
  EXPECT_EQ(c.apply(p), d.apply(sh.apply(p)));
  AffineMap2D r = AffineMap2D::rotation90();
  EXPECT_TRUE(r.after(r).after(r).after(r).is_identity());
  EXPECT_THROW(AffineMap2D(AffineMap2D::Matrix{{{Rational(2), Rational(0)}, {Rational(0), Rational(1)}}},
                           Vec2{Rational(0), Rational(0)}, true),
               Error);
}
