#include "bmstab/interval1d.hpp"

#include <algorithm>
#include <bit>
#include <thread>

#include "bmstab/error.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

namespace {

void check_pair(const Set1D& a, const Set1D& b) {
  if (a.scale() != b.scale())
    throw Error(ErrorCode::ScaleMismatch, "scales " + to_string(a.scale()) + " and " + to_string(b.scale()));
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyOperand, "1D sumset of an empty set");
}

template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, Fn fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    fn(begin, end, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t chunk = (end - begin + threads - 1) / threads;
  for (int k = 0; k < threads; ++k) {
    std::int64_t lo = begin + k * chunk, hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi, k);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

Set1D sumset_1d(const Set1D& a, const Set1D& b) {
  check_pair(a, b);
  std::vector<Run> out;
  out.reserve(a.runs().size() * b.runs().size());
  // [s1,e1) + [s2,e2) spans index sums s1+s2 .. e1+e2-2, dilated by {0,1}.
  for (const Run& x : a.runs())
    for (const Run& y : b.runs()) out.push_back({x.begin + y.begin, x.end + y.end});
  return Set1D(a.scale(), std::move(out));
}

Set1D scaled_sumset_1d(const Set1D& a, const Set1D& b, const Rational& t, std::int64_t max_den) {
  check_pair(a, b);
  TParts tp = split_t(t, max_den);
  auto scale = [&](const Set1D& s, std::int64_t k) {
    std::vector<Run> runs;
    for (const Run& r : s.runs()) runs.push_back({r.begin * k, r.end * k});
    return Set1D(Rational(s.scale() / tp.q), std::move(runs));
  };
  return sumset_1d(scale(a, tp.p), scale(b, tp.q - tp.p));
}

FreimanReport freiman_structure(const Set1D& a, const Set1D& b) {
  Set1D s = sumset_1d(a, b);
  FreimanReport r;
  r.measureA = a.length();
  r.measureB = b.length();
  r.sumMeasure = s.length();
  r.delta = r.sumMeasure - r.measureA - r.measureB;
  r.applicable = r.delta < min(r.measureA, r.measureB);
  r.hullA = a.hull();
  r.hullB = b.hull();
  r.slackA = a.scale() * r.hullA.length() - r.measureA - r.delta;
  r.slackB = b.scale() * r.hullB.length() - r.measureB - r.delta;
  return r;
}

LocalizationReport localize_right_tail(const Set1D& a, const Set1D& b, const Interval& i) {
  check_pair(a, b);
  const std::int64_t sup = b.sup_index();
  if (i.begin > sup || i.end < sup)
    throw Error(ErrorCode::IntervalMissesSup, "interval [" + std::to_string(i.begin) + "," +
                                                  std::to_string(i.end) + ") misses sup B = " +
                                                  std::to_string(sup));
  LocalizationReport r;
  r.delta = sumset_1d(a, b).length() - a.length() - b.length();
  Set1D tail = b.intersect({b.inf_index(), i.begin});
  if (tail.empty()) {
    r.vacuous = true;
    r.rhs = a.length() + r.delta;
    r.lhs = 0;
    r.holds = true;
    return r;
  }
  r.lhs = sumset_1d(a, tail).length();
  r.rhs = a.length() + tail.length() + r.delta;
  r.holds = r.lhs <= r.rhs;
  return r;
}

LocalizationReport localize_window(const Set1D& a, const Set1D& b, const Interval& i, const Interval& j) {
  check_pair(a, b);
  Set1D ai = a.intersect(i), bj = b.intersect(j);
  if (ai.empty() || bj.empty()) throw Error(ErrorCode::EmptyIntersection, "window misses A or B");
  LocalizationReport r;
  r.delta = sumset_1d(a, b).length() - a.length() - b.length();
  r.lhs = sumset_1d(ai, bj).length();
  r.rhs = ai.length() + bj.length() + r.delta;
  r.holds = r.lhs <= r.rhs;
  return r;
}

namespace mask1d {

Mask sumset(Mask a, Mask b) {
  Mask s = 0;
  while (a) {
    int k = std::countr_zero(a);
    s |= b << k;
    a &= a - 1;
  }
  return s | (s << 1);
}

int deficit_cells(Mask a, Mask b) {
  return std::popcount(sumset(a, b)) - std::popcount(a) - std::popcount(b);
}

int hull_cells(Mask a) { return a ? 32 - std::countl_zero(a) - std::countr_zero(a) : 0; }

Set1D to_set(Mask m, const Rational& scale) {
  std::vector<Run> runs;
  for (int k = 0; k < 32; ++k)
    if (m & (Mask(1) << k)) runs.push_back({k, k + 1});
  return Set1D(scale, std::move(runs));
}

namespace {

template <typename Check>
ExhaustiveResult sweep_pairs(int n, int threads, Check check) {
  if (n < 1 || n > 14) throw Error(ErrorCode::InvalidArgument, "universe must have 1..14 cells");
  const Mask full = (Mask(1) << n) - 1;
  std::vector<ExhaustiveResult> parts(static_cast<std::size_t>(std::max(1, threads)));
  parallel_for(1, static_cast<std::int64_t>(full) + 1, threads, [&](std::int64_t lo, std::int64_t hi, int k) {
    ExhaustiveResult& r = parts[static_cast<std::size_t>(k)];
    for (Mask a = static_cast<Mask>(lo); a < static_cast<Mask>(hi); ++a)
      for (Mask b = 1; b <= full; ++b) {
        ++r.pairs;
        check(a, b, r);
      }
  });
  ExhaustiveResult out;
  out.universe = n;
  for (const auto& r : parts) {
    out.pairs += r.pairs;
    out.checked += r.checked;
    out.counterexamples += r.counterexamples;
    out.strictCounterexamples += r.strictCounterexamples;
    if (!out.first && r.first) out.first = r.first;
  }
  return out;
}

}  // namespace

ExhaustiveResult bm_1d(int n, int threads) {
  return sweep_pairs(n, threads, [](Mask a, Mask b, ExhaustiveResult& r) {
    ++r.checked;
    if (deficit_cells(a, b) < 0) {
      ++r.counterexamples;
      ++r.strictCounterexamples;
      if (!r.first) r.first = {a, b};
    }
  });
}

ExhaustiveResult freiman(int n, int threads) {
  return sweep_pairs(n, threads, [](Mask a, Mask b, ExhaustiveResult& r) {
    const int d = deficit_cells(a, b);
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (d >= std::min(pa, pb)) return;
    ++r.checked;
    const int ha = hull_cells(a), hb = hull_cells(b);
    if (ha > pa + d || hb > pb + d) ++r.strictCounterexamples;
    if (ha > pa + d + 1 || hb > pb + d + 1) {
      ++r.counterexamples;
      if (!r.first) r.first = {a, b};
    }
  });
}

DeficitTable::DeficitTable(int n, int threads)
    : n_(n), table_(static_cast<std::size_t>(1) << (2 * n), 0) {
  if (n < 1 || n > 13) throw Error(ErrorCode::InvalidArgument, "deficit table supports 1..13 cells");
  const Mask full = (Mask(1) << n) - 1;
  parallel_for(1, static_cast<std::int64_t>(full) + 1, threads, [&](std::int64_t lo, std::int64_t hi, int) {
    for (Mask a = static_cast<Mask>(lo); a < static_cast<Mask>(hi); ++a)
      for (Mask b = 1; b <= full; ++b)
        table_[(static_cast<std::size_t>(a) << n_) | b] = static_cast<std::int8_t>(deficit_cells(a, b));
  });
}

namespace {

Mask low_bit(Mask m) { return m & (~m + 1); }
Mask high_bit(Mask m) { return Mask(1) << (31 - std::countl_zero(m)); }

}  // namespace

ExhaustiveResult localization_windows(const DeficitTable& d) {
  return sweep_pairs(d.n(), 1, [&](Mask a, Mask b, ExhaustiveResult& r) {
    const int base = d.at(a, b);
    const Mask cand[4][2] = {{a & ~low_bit(a), b}, {a & ~high_bit(a), b},
                             {a, b & ~low_bit(b)}, {a, b & ~high_bit(b)}};
    for (const auto& c : cand) {
      if (!c[0] || !c[1]) continue;
      ++r.checked;
      if (d.at(c[0], c[1]) > base) {
        ++r.counterexamples;
        ++r.strictCounterexamples;
        if (!r.first) r.first = {a, b};
      }
    }
  });
}

ExhaustiveResult localization_right_tail(const DeficitTable& d) {
  return sweep_pairs(d.n(), 1, [&](Mask a, Mask b, ExhaustiveResult& r) {
    const int base = d.at(a, b);
    for (Mask tail = b & ~high_bit(b); tail; tail &= ~high_bit(tail)) {
      ++r.checked;
      if (d.at(a, tail) > base) {
        ++r.counterexamples;
        ++r.strictCounterexamples;
        if (!r.first) r.first = {a, b};
      }
    }
  });
}

}  // namespace mask1d

}  // namespace bmstab
