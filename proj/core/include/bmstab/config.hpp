#pragma once

#include <cstdint>

#include "bmstab/rational.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

// Every threshold is delta^exponent with delta the measured multiplicative
// deficit of the pair being processed.
struct PipelineConfig {
  SumOptions sum;

  Rational measureBand{1, 4};       // |A|, |B| within this distance of 1
  Rational projectionBound{8};      // M in M^-1 <= |pi(A)|, |pi(B)| <= M
  double maxDelta = 0.2;            // larger deficits are rejected up front

  double levelExponent = 1.0 / 6;   // s0 window [d^e, 2 d^e]
  Rational levelCap{1, 2};          // ... clipped to levelCap * min sup
  double sliceExponent = 1.0 / 6;   // admitted slices have measure >= d^e
  double excessExponent = 1.0 / 4;  // 1D slice deficit and hull excess <= d^e
  double massExponent = 1.0 / 6;    // containment ball holds 1 - d^e of each set

  Rational slopeTolerance{1, 4};    // |slopeA - slopeB| above this pools the fits
  Rational inlierTolerance{1, 8};   // robust fit residual tolerance, in set units
  double approximationTolerance = 1e-9;

  bool secondPass = true;           // repeat in the rotated frame
  bool rationalRotation = false;    // optional Pythagorean-angle sweep
  int rotationSupersample = 4;

  int omegaPairSamples = 256;       // diagnostic only
  std::uint64_t omegaSeed = 1;
};

}  // namespace bmstab
