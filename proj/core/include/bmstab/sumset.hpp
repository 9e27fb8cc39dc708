#pragma once

#include <functional>
#include <optional>
#include <string>

#include "bmstab/lattice.hpp"

namespace bmstab {

enum class Engine { Naive, Bitmask, Convolution };

const char* to_string(Engine e);
Engine parse_engine(const std::string& name);

struct SumOptions {
  Engine engine = Engine::Bitmask;
  std::int64_t max_t_denominator = 64;
};

/// Exact A + B. Requires identical lattices and nonempty operands.
GridSet2D minkowski_sum(const GridSet2D& a, const GridSet2D& b, Engine engine = Engine::Bitmask);

GridSet2D minkowski_sum_naive(const GridSet2D& a, const GridSet2D& b);
GridSet2D minkowski_sum_bitmask(const GridSet2D& a, const GridSet2D& b);
/// FFT convolution of indicator grids; throws NumericalError if any count is
/// further than 1/4 from an integer.
GridSet2D minkowski_sum_convolution(const GridSet2D& a, const GridSet2D& b);

/// Dilation of an index set by the block {0,1}^2.
GridSet2D dilate_unit_block(const GridSet2D& s);

struct TParts {
  std::int64_t p;
  std::int64_t q;
};
/// Validates 0 < t < 1 with denominator <= max_den; throws InvalidT.
TParts split_t(const Rational& t, std::int64_t max_den = 64);

/// Each cell becomes a k x k block on the lattice refined by `den`:
/// the exact image of S under x -> (k/den) x.
GridSet2D scale_cells(const GridSet2D& s, std::int64_t k, std::int64_t den);

/// Exact tA + (1-t)B on the lattice refined by the denominator of t.
GridSet2D scaled_sum(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                     const SumOptions& opts = {});

struct DeficitReport {
  Rational measureA;
  Rational measureB;
  Rational measureS;       // |tA + (1-t)B|
  Rational measureSum;     // |A + B|
  Rational t;
  double deltaAdd = 0;
  double deltaMult = 0;
  double ratioAB = 0;
  std::optional<Rational> deltaAddExact;   // set when every square root is rational
  std::optional<Rational> deltaMultExact;  // set when |A|^t |B|^(1-t) is rational
};

DeficitReport deficit(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                      const SumOptions& opts = {});

/// Rational value of |A|^t |B|^(1-t) when it exists.
std::optional<Rational> exact_geometric_mean(const Rational& ma, const Rational& mb, const TParts& t);
double geometric_mean(const Rational& ma, const Rational& mb, const Rational& t);

struct BmCertificate {
  BigInt countS;
  BigInt countA;
  BigInt countB;
  TParts t{1, 2};
  bool equality = false;
  bool holds = false;
};

/// countS^q >= countA^p * countB^(q-p) on the common refined lattice.
BmCertificate bm_certificate(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                             const SumOptions& opts = {});
bool verify_bm_exact(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                     const SumOptions& opts = {});

struct Localized2DOptions {
  Rational measureBand{1, 4};  // |A|, |B| must lie in [1 - band, 1 + band]
  SumOptions sum;
};

struct Localized2DReport {
  std::int64_t c0 = 0;
  std::int64_t c1 = 0;
  Rational measureBTilde;
  Rational removedMass;      // |B \ B~|
  Rational measureSTilde;    // |tA + (1-t)B~|
  double powerTilde = 0;     // |A|^t |B~|^(1-t)
  double localizedGap = 0;   // |tA + (1-t)B~| - |A|^t |B~|^(1-t)
  Rational sumDrop;          // |S| - |S~|
  Rational requiredDrop;     // (1-t) |B \ B~|
  Rational dropSlack;        // sumDrop - requiredDrop
  bool dropHolds = false;    // dropSlack >= 0
  DeficitReport full;
};

/// B~ keeps the columns c0 <= i < c1 of B. Checks that the last column of A
/// dominates every column of B at or right of c1 and the first column of A
/// dominates every column left of c0; throws HypothesisNotSatisfied otherwise.
Localized2DReport localized_deficit_2d(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                                       std::int64_t c0, std::int64_t c1,
                                       const Localized2DOptions& opts = {});

}  // namespace bmstab
