#pragma once

#include <optional>
#include <vector>

#include "bmstab/affine.hpp"
#include "bmstab/config.hpp"
#include "bmstab/interval1d.hpp"
#include "bmstab/lattice.hpp"

namespace bmstab {

/// values[k] holds on [breakpoints[k], breakpoints[k+1]); zero from the last breakpoint on.
struct StepProfile {
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;
  Rational domainScale{1};

  Rational value_at(const Rational& s) const;
  Rational integral() const;
  /// End of the support, i.e. the last breakpoint (0 when empty).
  Rational support_end() const;
  bool nonincreasing() const;
};

/// s -> |{x : |S_x| > s}|.
StepProfile column_profile(const GridSet2D& s);

/// max_x |S_x|.
Rational sup_norm(const GridSet2D& s);

/// Columns whose slice measure exceeds `level`, scale hx/q.
Set1D superlevel_set(const GridSet2D& s, const Rational& level);

struct SupRatioReport {
  Rational supA, supB, supS;
  Rational ratioA;  // ||A|| / ||S||
  Rational ratioB;
  std::size_t levelsChecked = 0;
  bool inclusionHolds = true;  // tA_s + (1-t)B_s within S_s at every checked level
  std::optional<Rational> failingLevel;
};

SupRatioReport sup_ratio_check(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                               const SumOptions& opts = {});

struct VerticalNormalization {
  Rational r;  // applied as diag(r, 1/r)
  bool exact = false;
  AffineMap2D map;
  GridSet2D a, b;
  Rational supA, supB;  // after normalization
};

VerticalNormalization vertical_normalize(const GridSet2D& a, const GridSet2D& b,
                                         const PipelineConfig& cfg = {});

struct ProjectionReport {
  Rational projA, projB;
  Rational bound;
  Rational margin;  // min(min/M^-1, M/max); >= 1 when the bound holds
};

/// Throws BoundViolated when M^-1 <= |pi(A)|, |pi(B)| <= M fails.
ProjectionReport projection_bound_report(const GridSet2D& a, const GridSet2D& b,
                                         const Rational& bound = Rational(8));

struct PhiProfile {
  StepProfile phi;   // defined on [0, min sup)
  Rational minSup;
  Rational integral;
  Rational minimum;  // smallest value of phi on its domain
};

PhiProfile phi_profile(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                       const SumOptions& opts = {});

struct LevelSelection {
  Rational s0;
  Rational windowLo, windowHi;
  Rational phiAtS0;
  Interval intervalI;  // column hull of A_{s0}
  Interval intervalJ;  // column hull of B_{s0}
  Rational outsideMassA;  // |A outside the strip over I|
  Rational outsideMassB;
  bool endpointsHold = false;  // end columns of I, J have slices >= s0
  FreimanReport freiman;       // on the scaled pair (t A_{s0}, (1-t) B_{s0})
};

/// Throws WindowEmpty or FreimanInapplicable.
LevelSelection select_level_intervals(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                                      double delta, const PipelineConfig& cfg = {});

/// Rational approximation of delta^exponent (0 for delta <= 0).
Rational delta_power(double delta, double exponent, double tol = 1e-12);

}  // namespace bmstab
