#include <gtest/gtest.h>

#include "bmstab/error.hpp"
#include "bmstab/interval1d.hpp"
#include "oracles.hpp"

using namespace bmstab;
using mask1d::Mask;

namespace {

Set1D cells(std::initializer_list<Run> runs) { return Set1D(Rational(1), runs); }

std::set<std::int64_t> index_set(const Set1D& s) {
  std::set<std::int64_t> out;
  for (const Run& r : s.runs())
    for (std::int64_t i = r.begin; i < r.end; ++i) out.insert(i);
  return out;
}

}  // namespace

TEST(Interval1D, SumsetOfIntervalsAddsLengths) {
  Set1D s = sumset_1d(cells({{0, 3}}), cells({{10, 12}}));
  ASSERT_EQ(s.runs().size(), 1u);
  EXPECT_EQ(s.runs()[0], (bmstab::Run{10, 15}));
  EXPECT_EQ(s.length(), Rational(5));
}

TEST(Interval1D, SumsetMatchesBruteForce) {
  for (Mask a = 1; a < 64; a += 5)
    for (Mask b = 1; b < 64; b += 3) {
      Set1D s = sumset_1d(mask1d::to_set(a), mask1d::to_set(b));
      EXPECT_EQ(index_set(s), oracle::sum_1d(oracle::from_mask(a), oracle::from_mask(b)));
      EXPECT_EQ(index_set(mask1d::to_set(mask1d::sumset(a, b))), index_set(s));
    }
}

TEST(Interval1D, ScaleMismatchThrows) {
  try {
    sumset_1d(Set1D(Rational(1), {{0, 1}}), Set1D(Rational(1, 2), {{0, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScaleMismatch);
  }
}

TEST(Interval1D, ScaledSumsetUsesRefinedScale) {
  Set1D a(Rational(1), {{0, 2}}), b(Rational(1), {{4, 5}});
  Set1D s = scaled_sumset_1d(a, b, Rational(1, 3));
  EXPECT_EQ(s.scale(), Rational(1, 3));
  // (1/3)[0,2] + (2/3)[4,5] = [8/3, 4], length 4/3 = (1/3) 2 + (2/3) 1.
  EXPECT_EQ(s.length(), Rational(4, 3));
}

TEST(Freiman, ExactIntervalsHaveZeroSlack) {
  FreimanReport r = freiman_structure(cells({{0, 4}}), cells({{7, 9}}));
  EXPECT_EQ(r.delta, 0);
  EXPECT_TRUE(r.applicable);
  EXPECT_EQ(r.slackA, 0);
  EXPECT_EQ(r.slackB, 0);
}

TEST(Freiman, GapIsPaidByDeficit) {
  // A = cells {0, 2}, B = cells {0, 1, 2}: closed cells give A+B = [0, 6), delta = 6 - 2 - 3 = 1.
  FreimanReport r = freiman_structure(cells({{0, 1}, {2, 3}}), cells({{0, 3}}));
  EXPECT_EQ(r.sumMeasure, Rational(6));
  EXPECT_EQ(r.delta, 1);
  // The gap cell is exactly paid for by the deficit.
  EXPECT_EQ(r.slackA, 0);
}

TEST(Freiman, ExhaustiveAgreesWithDirectEnumeration) {
  const int n = 6;
  std::uint64_t bad = 0, checked = 0;
  for (Mask a = 1; a < (1u << n); ++a)
    for (Mask b = 1; b < (1u << n); ++b) {
      std::set<std::int64_t> sa = oracle::from_mask(a), sb = oracle::from_mask(b);
      const auto s = static_cast<std::int64_t>(oracle::sum_1d(sa, sb).size());
      const auto ma = static_cast<std::int64_t>(sa.size()), mb = static_cast<std::int64_t>(sb.size());
      const std::int64_t delta = s - ma - mb;
      if (delta >= std::min(ma, mb)) continue;
      ++checked;
      if (*sa.rbegin() - *sa.begin() + 1 > ma + delta + 1) ++bad;
      if (*sb.rbegin() - *sb.begin() + 1 > mb + delta + 1) ++bad;
    }
  mask1d::ExhaustiveResult r = mask1d::freiman(n);
  EXPECT_EQ(r.checked, checked);
  EXPECT_EQ(r.counterexamples, bad);
  EXPECT_EQ(r.counterexamples, 0u);
}

TEST(Freiman, OneDimensionalBmHoldsExhaustively) {
  mask1d::ExhaustiveResult r = mask1d::bm_1d(8, 2);
  EXPECT_EQ(r.pairs, 255u * 255u);
  EXPECT_EQ(r.counterexamples, 0u);
}

TEST(Localization, RightTailVacuousWhenIntervalCoversB) {
  LocalizationReport r = localize_right_tail(cells({{0, 3}}), cells({{2, 5}}), {2, 6});
  EXPECT_TRUE(r.vacuous);
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(localize_right_tail(cells({{0, 3}}), cells({{2, 5}}), {6, 9}), Error);
}

TEST(Localization, WindowInequalityHoldsOnExamples) {
  Set1D a = cells({{0, 3}, {5, 6}}), b = cells({{0, 2}, {4, 7}});
  for (std::int64_t lo = 0; lo < 6; ++lo)
    for (std::int64_t hi = lo + 1; hi <= 7; ++hi) {
      if (a.intersect({lo, hi}).empty() || b.intersect({lo, hi}).empty()) {
        EXPECT_THROW(localize_window(a, b, {lo, hi}, {lo, hi}), Error);
        continue;
      }
      LocalizationReport r = localize_window(a, b, {lo, hi}, {lo, hi});
      EXPECT_TRUE(r.holds) << lo << " " << hi;
    }
}

TEST(Localization, DeficitTableMatchesDirectComputation) {
  mask1d::DeficitTable t(6);
  for (Mask a = 1; a < 64; ++a)
    for (Mask b = 1; b < 64; ++b) {
      const auto s = static_cast<int>(oracle::sum_1d(oracle::from_mask(a), oracle::from_mask(b)).size());
      ASSERT_EQ(t.at(a, b), s - std::popcount(a) - std::popcount(b));
    }
  EXPECT_EQ(mask1d::localization_windows(t).counterexamples, 0u);
  EXPECT_EQ(mask1d::localization_right_tail(t).counterexamples, 0u);
}
