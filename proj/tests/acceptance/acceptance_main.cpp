// One line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bmstab/harness.hpp"
#include "bmstab/interval1d.hpp"
#include "bmstab/recovery.hpp"
#include "bmstab/sumset.hpp"

using namespace bmstab;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool pass, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string f(double x, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Tolerances.
constexpr double kBmSeconds = 120;
constexpr double kFreimanSeconds = 60;
constexpr double kSelfSumSeconds = 1;
constexpr double kDiskConstant = 1;
constexpr double kRatioConstant = 10;
constexpr double kContainmentRate = 0.95;
constexpr double kSpearman = 0.9;

void criterion1() {
  const LatticeSpec lattice(Rational(1), Rational(1), 1);
  const Rational ts[] = {Rational(1, 2), Rational(1, 3), Rational(2, 5)};
  Rng rng(20240601);
  Clock::time_point t0 = Clock::now();
  int checked = 0, bad = 0;
  for (int k = 0; k < 1000; ++k) {
    GridSet2D a = random_grid(rng, lattice, 64), b = random_grid(rng, lattice, 64);
    for (const Rational& t : ts) {
      ++checked;
      if (!verify_bm_exact(a, b, t)) ++bad;
    }
  }
  const double secs = since(t0);
  report(1, bad == 0 && secs < kBmSeconds,
         "exact BM on 1000 pairs x 3 t: " + std::to_string(bad) + " failures of " + std::to_string(checked) + ", " +
             f(secs) + " s (limit " + f(kBmSeconds) + " s)");
}

void criterion2() {
  const LatticeSpec lattice(Rational(1), Rational(1), 8);
  GridSet2D r = GridSet2D::rectangle(lattice, 0, 12, 0, 5);
  DeficitReport dr = deficit(r, r, Rational(1, 2));
  const bool rectExact = dr.deltaAddExact && dr.deltaMultExact && *dr.deltaAddExact == 0 && *dr.deltaMultExact == 0;

  // Disk rasters of unit area at resolution 16q for q = 1, 2, 4, 8.
  std::vector<double> deltas;
  double c = 0;
  bool decreasing = true;
  std::string values;
  for (int q : {1, 2, 4, 8}) {
    GeneratedPair g = generate({GeneratorKind::Disk, 16 * q, Rational(0), 1});
    const double d = deficit(g.a, g.a, Rational(1, 2)).deltaMult;
    if (!deltas.empty() && !(d < deltas.back())) decreasing = false;
    deltas.push_back(d);
    c = std::max(c, d * q);
    values += (values.empty() ? "" : ", ") + f(d);
  }
  const double order = std::log(deltas.front() / deltas.back()) / std::log(8.0);
  report(2, rectExact && decreasing && c <= kDiskConstant,
         std::string("rectangle deltaAdd = deltaMult = 0 exactly: ") + (rectExact ? "yes" : "no") +
             "; disk deltaMult at q=1,2,4,8: " + values + (decreasing ? " (strictly decreasing)" : " (NOT decreasing)") +
             ", fitted C = max q delta_q = " + f(c) + " (limit " + f(kDiskConstant) + "), empirical order " + f(order));
}

void criterion3() {
  Clock::time_point t0 = Clock::now();
  mask1d::ExhaustiveResult r = mask1d::freiman(12, default_threads());
  const double secs = since(t0);
  report(3, r.counterexamples == 0 && secs < kFreimanSeconds,
         "1D Freiman over 12 cells: " + std::to_string(r.checked) + " pairs with delta < min, " +
             std::to_string(r.counterexamples) + " counterexamples with one-cell tolerance (" +
             std::to_string(r.strictCounterexamples) + " without), " + f(secs) + " s (limit " + f(kFreimanSeconds) +
             " s)");
}

void criterion4() {
  Clock::time_point t0 = Clock::now();
  mask1d::DeficitTable table(12, default_threads());
  mask1d::ExhaustiveResult w = mask1d::localization_windows(table);
  mask1d::ExhaustiveResult tail = mask1d::localization_right_tail(table);
  report(4, w.counterexamples == 0 && tail.counterexamples == 0,
         "localization over 12 cells: windows " + std::to_string(w.checked) + " checks, " +
             std::to_string(w.counterexamples) + " counterexamples; right tails " + std::to_string(tail.checked) +
             " checks, " + std::to_string(tail.counterexamples) + " counterexamples; " + f(since(t0)) + " s");
}

void criterion5() {
  const LatticeSpec lattice(Rational(1), Rational(1), 1);
  Rng rng(5150);
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    GridSet2D a = random_grid(rng, lattice, 24), b = random_grid(rng, lattice, 24);
    GridSet2D n = minkowski_sum_naive(a, b);
    if (minkowski_sum_bitmask(a, b) != n || minkowski_sum_convolution(a, b) != n) ++mismatches;
  }
  GridSet2D sq = GridSet2D::rectangle(lattice, 0, 1024, 0, 1024);
  Clock::time_point t0 = Clock::now();
  GridSet2D s = minkowski_sum_bitmask(sq, sq);
  const double secs = since(t0);
  const bool square = s == GridSet2D::rectangle(lattice, 0, 2048, 0, 2048);
  report(5, mismatches == 0 && square,
         "engines identical on 1000 pairs: " + std::to_string(1000 - mismatches) + "/1000; 1024^2 self-sum " +
             f(secs) + " s" + (secs < kSelfSumSeconds ? " (within" : " (over, reported only:") + " target " +
             f(kSelfSumSeconds) + " s)");
}

struct SweepChecks {
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

SweepChecks bite_sweep() {
  std::vector<GeneratorSpec> specs;
  for (const Rational& f0 : {Rational(1, 100), Rational(2, 100), Rational(5, 100)})
    for (std::uint64_t s = 1; s <= 30; ++s) specs.push_back({GeneratorKind::BitePair, 32, f0, s});
  SweepResult r = run_sweep(specs, {Rational(1, 2)});
  return {r.rows, r.summary};
}

void criterion6(const SweepChecks& sw) {
  double worst = 0;
  int bad = 0, n = 0;
  for (const SweepRow& r : sw.rows) {
    if (!r.success()) continue;
    ++n;
    const double dev = std::fabs(r.ratioAB - 1), bound = kRatioConstant * std::sqrt(r.deltaMult);
    if (dev > bound) ++bad;
    if (r.deltaMult > 0) worst = std::max(worst, dev / std::sqrt(r.deltaMult));
  }
  report(6, bad == 0 && n > 0,
         "|ratioAB - 1| <= 10 sqrt(deltaMult) on " + std::to_string(n - bad) + "/" + std::to_string(n) +
             " successful rows, fitted C = " + f(worst));
}

void criterion7(const SweepChecks& sw) {
  int rows = 0, contained = 0, within = 0;
  double worst = 0;
  for (const SweepRow& r : sw.rows) {
    ++rows;
    if (!r.success() || !*r.containsA || !*r.containsB) continue;
    ++contained;
    const double bound = 5 * to_double(r.biteFraction) + 2 * r.rasterDefect;
    const double eps = std::max(*r.epsilonA, *r.epsilonB);
    worst = std::max(worst, eps / bound);
    if (eps <= bound) ++within;
  }
  const double rate = rows ? static_cast<double>(contained) / rows : 0;
  report(7, rate >= kContainmentRate && within == contained,
         "containment on " + std::to_string(contained) + "/" + std::to_string(rows) + " rows (" + f(100 * rate) +
             "%, need " + f(100 * kContainmentRate) + "%); eps <= 5 eps0 + 2 raster defect on " +
             std::to_string(within) + "/" + std::to_string(contained) + ", worst eps/bound " + f(worst));
}

void criterion8(const SweepChecks& sw) {
  const auto& s = sw.summary;
  report(8, s.spearman && *s.spearman >= kSpearman,
         "Spearman(delta, eps) = " + (s.spearman ? f(*s.spearman) : std::string("n/a")) + " over " +
             std::to_string(s.successes) + " rows (need >= " + f(kSpearman) + "); gammaHat = " +
             (s.gammaHat ? f(*s.gammaHat) : std::string("n/a")) + " (reported only)");
}

void criterion9(const SweepChecks& sw) {
  int checked = 0, bad = 0, missing = 0;
  for (const SweepRow& r : sw.rows) {
    if (!r.detExact || !r.measureExact) {
      if (r.success()) ++missing;
      continue;
    }
    ++checked;
    if (!*r.detExact || !*r.measureExact) ++bad;
  }
  report(9, bad == 0 && missing == 0 && checked > 0,
         "|det| = 1 and exact measure preservation on " + std::to_string(checked - bad) + "/" +
             std::to_string(checked) + " normalized rows");
}

void criterion10() {
  std::vector<GeneratorSpec> specs;
  for (std::uint64_t s = 1; s <= 30; ++s) specs.push_back({GeneratorKind::BlobPair, 32, Rational(0), s});
  int structured = 0, total = 0;
  try {
    SweepResult r = run_sweep(specs, {Rational(1, 2)});
    for (const SweepRow& row : r.rows) {
      ++total;
      if (row.stageFailure && row.stageFailure->find(":Internal") == std::string::npos) ++structured;
    }
  } catch (...) {
    report(10, false, "sweep over blob pairs threw");
    return;
  }
  report(10, total > 0 && structured == total,
         "blob pairs with structured stage errors: " + std::to_string(structured) + "/" + std::to_string(total));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  SweepChecks sw = bite_sweep();
  criterion6(sw);
  criterion7(sw);
  criterion8(sw);
  criterion9(sw);
  criterion10();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
