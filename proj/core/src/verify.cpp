#include <chrono>
#include <sstream>

#include "bmstab/error.hpp"
#include "bmstab/grid_io.hpp"
#include "bmstab/harness.hpp"
#include "bmstab/interval1d.hpp"
#include "bmstab/recovery.hpp"

namespace bmstab {

bool VerifyReport::passed() const {
  for (const VerifyCheck& c : checks)
    if (!c.passed) return false;
  return true;
}

std::pair<GridSet2D, GridSet2D> shrink_counterexample(
    GridSet2D a, GridSet2D b, const std::function<bool(const GridSet2D&, const GridSet2D&)>& fails) {
  auto shrink_side = [&](GridSet2D& side, const GridSet2D& other, bool first) {
    bool progress = false;
    for (const auto& cell : side.cells()) {
      if (side.cell_count() <= 1) break;
      GridSet2D smaller = set_difference(side, GridSet2D::from_cells(side.lattice(), {cell}));
      if (first ? fails(smaller, other) : fails(other, smaller)) {
        side = std::move(smaller);
        progress = true;
      }
    }
    return progress;
  };
  for (bool progress = true; progress;) {
    progress = shrink_side(a, b, true);
    progress = shrink_side(b, a, false) || progress;
  }
  return {a, b};
}

namespace {

using Clock = std::chrono::steady_clock;

std::string pair_text(const GridSet2D& a, const GridSet2D& b) {
  return "A\n" + to_bmgrid(a) + "B\n" + to_bmgrid(b);
}

std::string mask_text(mask1d::Mask a, mask1d::Mask b) {
  std::ostringstream s;
  s << "A=0x" << std::hex << a << " B=0x" << b;
  return s.str();
}

VerifyCheck exhaustive(const std::string& name, const mask1d::ExhaustiveResult& r) {
  VerifyCheck c;
  c.name = name;
  c.checked = r.checked;
  c.passed = r.counterexamples == 0;
  c.detail = "universe " + std::to_string(r.universe) + ", pairs " + std::to_string(r.pairs) + ", counterexamples " +
             std::to_string(r.counterexamples) + ", strict " + std::to_string(r.strictCounterexamples);
  if (r.first && r.counterexamples > 0) c.counterexample = mask_text(r.first->first, r.first->second);
  return c;
}

template <class F>
VerifyCheck timed(F&& f) {
  Clock::time_point t0 = Clock::now();
  VerifyCheck c = f();
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return c;
}

}  // namespace

VerifyReport verify_all(const VerifyOptions& opts) {
  const bool full = opts.level == VerifyLevel::Full;
  const int threads = opts.threads > 0 ? opts.threads : default_threads();
  const int n = full ? 12 : 9;
  VerifyReport rep;

  rep.checks.push_back(timed([&] { return exhaustive("bm_1d", mask1d::bm_1d(n, threads)); }));
  rep.checks.push_back(timed([&] { return exhaustive("freiman_1d", mask1d::freiman(n, threads)); }));
  {
    mask1d::DeficitTable table(n, threads);
    rep.checks.push_back(timed([&] { return exhaustive("localization_windows", mask1d::localization_windows(table)); }));
    rep.checks.push_back(
        timed([&] { return exhaustive("localization_right_tail", mask1d::localization_right_tail(table)); }));
  }

  const LatticeSpec lattice(Rational(1), Rational(1), 1);
  const SumEngineFn engine = opts.engineUnderTest ? opts.engineUnderTest : SumEngineFn(minkowski_sum_bitmask);

  rep.checks.push_back(timed([&] {
    VerifyCheck c;
    c.name = "engine_equivalence";
    Rng rng(opts.seed);
    const int pairs = full ? 1000 : 100;
    for (int k = 0; k < pairs && c.passed; ++k) {
      GridSet2D a = random_grid(rng, lattice, 16), b = random_grid(rng, lattice, 16);
      GridSet2D ref = minkowski_sum_naive(a, b);
      ++c.checked;
      auto fails = [&](const GridSet2D& x, const GridSet2D& y) {
        GridSet2D r = minkowski_sum_naive(x, y);
        return engine(x, y) != r || minkowski_sum_convolution(x, y) != r;
      };
      if (engine(a, b) != ref || minkowski_sum_convolution(a, b) != ref) {
        c.passed = false;
        auto [ma, mb] = shrink_counterexample(a, b, fails);
        c.counterexample = pair_text(ma, mb);
        c.detail = "pair " + std::to_string(k) + " differs from the naive sum";
      }
    }
    if (c.passed) c.detail = std::to_string(c.checked) + " pairs identical across engines";
    return c;
  }));

  rep.checks.push_back(timed([&] {
    VerifyCheck c;
    c.name = "exact_bm";
    Rng rng(opts.seed + 1);
    const int pairs = full ? 1000 : 100;
    const Rational ts[] = {Rational(1, 2), Rational(1, 3), Rational(2, 5)};
    for (int k = 0; k < pairs && c.passed; ++k) {
      GridSet2D a = random_grid(rng, lattice, full ? 64 : 32), b = random_grid(rng, lattice, full ? 64 : 32);
      const Rational& t = ts[k % 3];
      ++c.checked;
      if (!verify_bm_exact(a, b, t)) {
        c.passed = false;
        auto [ma, mb] = shrink_counterexample(a, b, [&](const GridSet2D& x, const GridSet2D& y) {
          return !verify_bm_exact(x, y, t);
        });
        c.counterexample = pair_text(ma, mb);
        c.detail = "t = " + to_string(t);
      }
    }
    if (c.passed) c.detail = std::to_string(c.checked) + " pairs satisfy the exact inequality";
    return c;
  }));

  rep.checks.push_back(timed([&] {
    VerifyCheck c;
    c.name = "pipeline_invariants";
    const int seeds = full ? 12 : 3;
    std::vector<std::string> problems;
    int stageFailures = 0;  // allowed: failures are reported, not invariant violations
    for (int s = 1; s <= seeds; ++s) {
      GeneratorSpec spec{GeneratorKind::BitePair, 24, Rational(1, 50), opts.seed * 1000 + static_cast<std::uint64_t>(s)};
      GeneratedPair g = generate(spec);
      ++c.checked;
      try {
        RecoveryReport r = recover(g.a, g.b, Rational(1, 2));
        const NormalizedPair& np = r.normalized;
        if (abs(np.composedMapA.det()) != 1 || abs(np.composedMapB.det()) != 1) problems.push_back("det");
        if (measure(np.a) != measure(g.a) || measure(np.b) != measure(g.b)) problems.push_back("measure");
        if (r.containsA != (r.insideA == r.measureA) || r.epsilonA < 0 || r.epsilonB < 0)
          problems.push_back("containment");
        if (r.containsA && r.containsB && r.areaK < max(r.measureA, r.measureB)) problems.push_back("area");
      } catch (const StageError&) {
        ++stageFailures;
      }
      if (!problems.empty()) {
        c.passed = false;
        c.counterexample = pair_text(g.a, g.b);
        c.detail = "seed " + std::to_string(spec.seed) + ": " + problems.front();
        break;
      }
    }
    if (c.passed)
      c.detail = std::to_string(c.checked) + " bite pairs, exact invariants hold, stage failures " +
                 std::to_string(stageFailures);
    return c;
  }));
  return rep;
}

}  // namespace bmstab
