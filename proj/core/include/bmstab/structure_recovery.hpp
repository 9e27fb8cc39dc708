#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmstab/affine.hpp"
#include "bmstab/config.hpp"
#include "bmstab/level_profile.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

struct AlignedPair {
  GridSet2D a, b;
  std::int64_t shiftA = 0, shiftB = 0;  // column translations applied
  std::int64_t cellsA = 0, cellsB = 0;  // I = [0, a], J = [0, b] in columns
  Rational lengthA, lengthB;            // a, b
  Rational gap;                         // |a - b|
  AffineMap2D mapA, mapB;
};

AlignedPair align_projections(const GridSet2D& a, const GridSet2D& b, const LevelSelection& sel);

struct TruncationReport {
  GridSet2D a, b;
  std::int64_t columns = 0;  // strip is columns [0, columns)
  Rational additiveGap;      // |tA# + (1-t)B#| - t|A#| - (1-t)|B#|
  Rational clippedA, clippedB;
};

/// Keeps columns [0, columns) of both sets; throws EmptyAfterTruncation.
TruncationReport truncate_sharp(const GridSet2D& a, const GridSet2D& b, std::int64_t columns,
                                const Rational& t, const SumOptions& opts = {});

struct ColumnRecord {
  std::int64_t k = 0;       // cell of [0, c]
  std::int64_t colA = 0;    // x'
  std::int64_t colB = 0;    // x''
  Rational measureA, measureB;
  Rational deficit1d;       // |tA_x' + (1-t)B_x''| - t|A_x'| - (1-t)|B_x''|
  Rational excessA, excessB;
  bool admitted = false;
};

struct SliceFit {
  Set1D omega;  // admitted cells of [0, c], scale hx/q
  std::map<std::int64_t, Rational> centersPhi;  // column of A -> hull center (y units)
  std::map<std::int64_t, Rational> centersPsi;
  std::map<std::int64_t, Rational> lengthsA, lengthsB;
  std::map<std::int64_t, Rational> excessA, excessB;  // |I_x| - |A_x|
  std::vector<ColumnRecord> columns;
  Rational c;                // t a + (1-t) b
  Rational complementMass;   // cells of [0, c] left out of omega, times the cell width
  Rational sliceThreshold;   // delta^(1/6)
  Rational excessThreshold;  // delta^(1/4)
};

/// Throws OmegaEmpty when no column is admitted.
SliceFit fit_slice_intervals(const GridSet2D& a, const GridSet2D& b, const Rational& t, double delta,
                             std::int64_t cellsA, std::int64_t cellsB, const PipelineConfig& cfg = {});

struct Point2 {
  Rational x, y;
};

struct RobustFit {
  Rational slope;
  Rational intercept;
  double inlierFraction = 0;
  std::size_t points = 0;
};

/// Theil-Sen: lower median of pairwise slopes, lower median of residuals.
/// Throws DegenerateInput when fewer than two distinct x values are present.
RobustFit robust_affine_fit(const std::vector<Point2>& points, const Rational& inlierTolerance);

/// Hull centers of a fit as points at column centers.
std::vector<Point2> center_points(const std::map<std::int64_t, Rational>& centers, const Rational& cellWidth);

struct ShearResult {
  GridSet2D a, b;
  Rational slope;  // removed slope
  Rational interceptA, interceptB;
  std::int64_t shiftA = 0, shiftB = 0;  // extra vertical cell shifts
  bool pooled = false;                  // slopes disagreed beyond tolerance
  AffineMap2D mapA, mapB;
};

ShearResult shear_normalize(const GridSet2D& a, const GridSet2D& b, const RobustFit& fitA, const RobustFit& fitB,
                            const std::vector<Point2>& pointsA, const std::vector<Point2>& pointsB,
                            const PipelineConfig& cfg = {});

struct PassReport {
  std::string label;
  DeficitReport deficit;
  VerticalNormalization vertical;
  ProjectionReport projection;
  LevelSelection selection;
  AlignedPair aligned;
  TruncationReport truncation;
  SliceFit fit;
  RobustFit fitA, fitB;
  ShearResult shear;
};

struct OmegaDiagnostic {
  int samples = 0;
  int bad = 0;
  Rational productMeasure;  // |omega_A| * |omega_B|
  double badMeasure = 0;    // estimate of |omega^x|
};

struct RotationProbe {
  Rational cosine, sine;
  Rational measureErrorA, measureErrorB;
  double deltaMult = 0;
  Rational supA, supB;
};

struct NormalizedPair {
  GridSet2D a, b;
  AffineMap2D composedMapA, composedMapB;
  Vec2 centroidA, centroidB;
  Rational containmentBallRadius;  // l-infinity radius around each centroid
  Rational insideMassA, insideMassB;
  Rational fullContainmentRadius;
  Rational massFraction;
  std::vector<PassReport> passes;
  std::vector<OmegaDiagnostic> omega;
  std::vector<RotationProbe> rotations;
};

/// Horizontal pass, rotate90, vertical pass, rotate back. Stage failures
/// surface as StageError naming the pass and step.
NormalizedPair normalize_full(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                              const PipelineConfig& cfg = {});

Vec2 centroid(const GridSet2D& s);

/// Exact measure of s inside the closed square of half-side r around center.
Rational mass_in_box(const GridSet2D& s, const Vec2& center, const Rational& r);

/// Raster of the rotation (x, y) -> (cx - sy, sx + cy), c^2 + s^2 = 1, by
/// majority vote over a supersampling grid.
GridSet2D rational_rotate(const GridSet2D& s, const Rational& c, const Rational& sn, int supersample);

}  // namespace bmstab
