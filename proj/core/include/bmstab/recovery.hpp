#pragma once

#include <optional>

#include "bmstab/config.hpp"
#include "bmstab/convex_geometry.hpp"
#include "bmstab/structure_recovery.hpp"

namespace bmstab {

enum class Alignment {
  Centroid,  // v = centroid(B) - centroid(A)
  Refined,   // then a descent on area(hull(A ∪ (B - v))) over dyadic cell steps
};

struct BodyOptions {
  Alignment alignment = Alignment::Centroid;
  int refineLevels = 4;  // step sizes cell, cell/2, ..., cell/2^(levels-1)
  int arcSegments = 32;
  double distanceTolerance = 1e-12;
};

struct RecoveryReport {
  DeficitReport deficit;
  NormalizedPair normalized;
  ConvexPolygon C;  // hull of A and B - v
  ConvexPolygon K;  // C plus a circumscribed disk of radius rho
  Rational rho;
  Vec2 shiftU, shiftV;
  Vec2 centroidOffset;  // centroid(B) - centroid(A); the start of the refinement
  Rational areaK;
  Rational measureA, measureB;
  Rational insideA, insideB;  // |A ∩ (K+u)|, |B ∩ (K+v)|
  Rational epsilonA, epsilonB;
  bool containsA = false, containsB = false;
  Rational defectA, defectB;  // convexity defects of the normalized sets
  std::optional<AffineMap2D> whitening;  // of the normalized A
  double delta = 0;
};

/// Common body for the normalized pair with u = 0 and v from `opts.alignment`.
RecoveryReport build_common_body(const NormalizedPair& normalized, double delta, const BodyOptions& opts = {});

/// deficit -> normalize_full -> build_common_body. Stage failures propagate
/// as StageError.
RecoveryReport recover(const GridSet2D& a, const GridSet2D& b, const Rational& t, const PipelineConfig& cfg = {},
                       const BodyOptions& opts = {});

}  // namespace bmstab
