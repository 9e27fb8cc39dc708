#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bmstab/lattice.hpp"

namespace bmstab {

/// Exact A + B for equal scales; throws ScaleMismatch / EmptyOperand.
Set1D sumset_1d(const Set1D& a, const Set1D& b);

/// Exact tA + (1-t)B on the scale divided by the denominator of t.
Set1D scaled_sumset_1d(const Set1D& a, const Set1D& b, const Rational& t, std::int64_t max_den = 64);

struct FreimanReport {
  Rational measureA;
  Rational measureB;
  Rational sumMeasure;
  Rational delta;
  bool applicable = false;  // delta < min(|A|, |B|)
  Interval hullA;
  Interval hullB;
  Rational slackA;  // |hull A| - |A| - delta
  Rational slackB;
};

FreimanReport freiman_structure(const Set1D& a, const Set1D& b);

struct LocalizationReport {
  Rational delta;  // of the unrestricted pair
  Rational lhs;    // measure of the restricted sumset
  Rational rhs;    // restricted measures plus delta
  bool vacuous = false;
  bool holds = false;  // lhs <= rhs
};

/// I = [lo, hi) in cell indices; requires lo <= sup B <= hi (IntervalMissesSup).
/// B \ I keeps the cells of B below lo.
LocalizationReport localize_right_tail(const Set1D& a, const Set1D& b, const Interval& i);

/// Windows are cell-index intervals; throws EmptyIntersection if A∩I or B∩J is empty.
LocalizationReport localize_window(const Set1D& a, const Set1D& b, const Interval& i, const Interval& j);

// Subsets of a small universe {0..n-1} encoded as bit masks, for exhaustive sweeps.
namespace mask1d {

using Mask = std::uint32_t;

Mask sumset(Mask a, Mask b);
int deficit_cells(Mask a, Mask b);
int hull_cells(Mask a);
Set1D to_set(Mask m, const Rational& scale = Rational(1));

struct ExhaustiveResult {
  int universe = 0;
  std::uint64_t pairs = 0;
  std::uint64_t checked = 0;          // pairs where the statement has content
  std::uint64_t counterexamples = 0;  // with the documented tolerance
  std::uint64_t strictCounterexamples = 0;  // without any tolerance
  std::optional<std::pair<Mask, Mask>> first;
};

/// |A+B| >= |A| + |B| on every pair.
ExhaustiveResult bm_1d(int n, int threads = 1);
/// delta < min(|A|,|B|) implies |hull| <= |A| + delta (+1 cell of tolerance), for A and B.
ExhaustiveResult freiman(int n, int threads = 1);

/// Deficit table D[a][b] = |A+B| - |A| - |B| in cells, over all nonempty masks.
class DeficitTable {
 public:
  explicit DeficitTable(int n, int threads = 1);
  int n() const { return n_; }
  int at(Mask a, Mask b) const { return table_[(static_cast<std::size_t>(a) << n_) | b]; }

 private:
  int n_;
  std::vector<std::int8_t> table_;
};

/// Every window restriction of a pair has deficit <= the pair's deficit.
/// Restrictions are generated by removing extreme cells, so checking single
/// removals suffices by transitivity.
ExhaustiveResult localization_windows(const DeficitTable& d);
/// Right-tail removal: B with its top cells removed.
ExhaustiveResult localization_right_tail(const DeficitTable& d);

}  // namespace mask1d

}  // namespace bmstab
