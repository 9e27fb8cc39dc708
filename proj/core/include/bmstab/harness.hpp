#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bmstab/config.hpp"
#include "bmstab/lattice.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

// ---- random source ------------------------------------------------------
// std::mt19937_64 is fully specified by the standard; distributions are not,
// so draws go through uniform_below (rejection sampling on the raw stream).
using Rng = std::mt19937_64;

std::uint64_t uniform_below(Rng& rng, std::uint64_t n);
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);  // inclusive

// ---- generators ---------------------------------------------------------
enum class GeneratorKind { Rectangle, Ellipse, Disk, RandomPolygon, BitePair, HomotheticPair, BlobPair };

const char* to_string(GeneratorKind k);
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::BitePair;
  std::int64_t resolution = 32;  // cells per unit length; sets have measure close to 1
  Rational biteFraction{0};      // in [0, 1/4]
  std::uint64_t seed = 1;
};

struct GeneratedPair {
  GridSet2D a, b;
  GridSet2D baseA, baseB;     // convex rasters before bites
  Rational rasterDefect;      // max convexity defect of the bases over max(|A|,|B|)
  Rational biteMassA, biteMassB;
};

/// Deterministic in the spec. Throws InvalidSpec.
GeneratedPair generate(const GeneratorSpec& spec);

/// Cells whose centers satisfy a u^2 + 2 b u v + c v^2 <= r, with (u, v) the
/// center in half-cell units relative to the origin cell corner.
GridSet2D raster_quadratic(const LatticeSpec& lattice, std::int64_t a, std::int64_t b, std::int64_t c,
                           std::int64_t r);

/// Removes `cells` cells from s in `clusters` grown from random boundary cells.
GridSet2D bite(const GridSet2D& s, std::int64_t cells, int clusters, Rng& rng);

/// Random set inside a box of at most maxSide x maxSide cells: unions of
/// rectangles or sparse random cells, depending on the draw.
GridSet2D random_grid(Rng& rng, const LatticeSpec& lattice, std::int64_t maxSide);

// ---- sweeps -------------------------------------------------------------
struct SweepRow {
  std::string kind;
  std::int64_t resolution = 0;
  Rational biteFraction;
  std::uint64_t seed = 0;
  Rational t;
  double deltaMult = 0;
  double deltaAdd = 0;
  double ratioAB = 0;
  std::optional<double> epsilonA, epsilonB;
  std::optional<bool> containsA, containsB;
  std::optional<double> rho;
  double rasterDefect = 0;
  std::optional<bool> detExact;      // |det| = 1 for both composed maps
  std::optional<bool> measureExact;  // normalized measures equal the inputs
  std::optional<std::string> stageFailure;  // "stage:Code"
  double secondsGenerate = 0, secondsDeficit = 0, secondsRecover = 0;

  bool success() const { return !stageFailure.has_value(); }
};

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  bool allFailed = false;
  std::optional<double> gammaHat;  // least-squares slope of log eps on log delta
  std::optional<double> spearman;  // rank correlation of delta and eps
  std::optional<double> ratioConstant;  // max |ratioAB - 1| / sqrt(deltaMult)
  std::size_t ioErrors = 0;
};

struct SweepOptions {
  int threads = 0;  // 0: BMSTAB_THREADS or 1
  bool timings = false;
  PipelineConfig pipeline;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

/// One row per (generator spec, t); rows keep the input order regardless of threads.
SweepResult run_sweep(const std::vector<GeneratorSpec>& specs, const std::vector<Rational>& ts,
                      const SweepOptions& opts = {});
/// Same, also writing the CSV to `outPath` (I/O failures are counted, not thrown).
SweepResult run_sweep(const std::vector<GeneratorSpec>& specs, const std::vector<Rational>& ts,
                      const std::string& outPath, const SweepOptions& opts = {});

SweepRow run_row(const GeneratorSpec& spec, const Rational& t, const SweepOptions& opts = {});
SweepSummary summarize(const std::vector<SweepRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timings = false);

/// Average ranks for ties, Pearson on ranks. nullopt if either side is constant.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);
std::optional<double> least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

/// BMSTAB_THREADS when set and positive, else 1.
int default_threads();

// ---- verification -------------------------------------------------------
enum class VerifyLevel { Quick, Full };

struct VerifyCheck {
  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::string detail;
  std::optional<std::string> counterexample;  // BMGRID text of a minimal failing pair
  double seconds = 0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool passed() const;
};

using SumEngineFn = std::function<GridSet2D(const GridSet2D&, const GridSet2D&)>;

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  int threads = 0;
  std::uint64_t seed = 1;
  SumEngineFn engineUnderTest;  // empty: the bitmask engine
};

VerifyReport verify_all(const VerifyOptions& opts = {});

/// Greedy cell removal keeping `fails(a, b)` true.
std::pair<GridSet2D, GridSet2D> shrink_counterexample(
    GridSet2D a, GridSet2D b, const std::function<bool(const GridSet2D&, const GridSet2D&)>& fails);

}  // namespace bmstab
