#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "bmstab/error.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

namespace {

void check_operands(const GridSet2D& a, const GridSet2D& b) {
  if (!(a.lattice() == b.lattice()))
    throw Error(ErrorCode::LatticeMismatch, "minkowski_sum operands live on different lattices");
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyOperand, "minkowski_sum of an empty set");
}

// Dense row-major bit grid used by the naive and convolution engines.
struct Dense {
  std::int64_t i0 = 0, j0 = 0, w = 0, h = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t& at(std::int64_t i, std::int64_t j) {
    return bits[static_cast<std::size_t>((j - j0) * w + (i - i0))];
  }

  GridSet2D to_grid(const LatticeSpec& lattice) const {
    GridSet2D::Rows rows;
    for (std::int64_t y = 0; y < h; ++y) {
      std::vector<Run> runs;
      const std::uint8_t* row = bits.data() + y * w;
      for (std::int64_t x = 0; x < w;) {
        if (!row[x]) { ++x; continue; }
        std::int64_t s = x;
        while (x < w && row[x]) ++x;
        runs.push_back({i0 + s, i0 + x});
      }
      if (!runs.empty()) rows.emplace(j0 + y, std::move(runs));
    }
    return GridSet2D(lattice, std::move(rows));
  }
};

// Variable-length bitset over bit positions [0, nbits).
struct Bits {
  std::vector<std::uint64_t> words;
  std::int64_t nbits = 0;

  explicit Bits(std::int64_t n = 0) : words(static_cast<std::size_t>((n + 63) / 64), 0), nbits(n) {}

  void set_range(std::int64_t b, std::int64_t e) {
    for (std::int64_t k = b; k < e;) {
      std::size_t wi = static_cast<std::size_t>(k >> 6);
      int off = static_cast<int>(k & 63);
      std::int64_t take = std::min<std::int64_t>(64 - off, e - k);
      std::uint64_t mask = take == 64 ? ~0ULL : (((1ULL << take) - 1) << off);
      words[wi] |= mask;
      k += take;
    }
  }

  // First position >= k holding `value`, or nbits.
  std::int64_t next(std::int64_t k, bool value) const {
    while (k < nbits) {
      std::size_t wi = static_cast<std::size_t>(k >> 6);
      std::uint64_t word = value ? words[wi] : ~words[wi];
      word >>= (k & 63);
      if (word) return std::min(nbits, k + std::countr_zero(word));
      k = static_cast<std::int64_t>(wi + 1) * 64;
    }
    return nbits;
  }

  // this |= src << shift (bit positions).
  void or_shifted(const Bits& src, std::int64_t shift) {
    const std::size_t ws = static_cast<std::size_t>(shift >> 6);
    const int bs = static_cast<int>(shift & 63);
    const std::size_t n = src.words.size();
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t v = src.words[k];
      if (!v) continue;
      std::size_t d = k + ws;
      if (d < words.size()) words[d] |= v << bs;
      if (bs != 0 && d + 1 < words.size()) words[d + 1] |= v >> (64 - bs);
    }
  }
};

// Union of src shifted by 0..len-1, built by doubling.
Bits dilate_bits(const Bits& src, std::int64_t len) {
  Bits result(src.nbits + len - 1);
  Bits power(src.nbits + len - 1);
  power.or_shifted(src, 0);
  std::int64_t span = 1, offset = 0;
  std::int64_t remaining = len;
  while (true) {
    if (remaining & 1) {
      result.or_shifted(power, offset);
      offset += span;
    }
    remaining >>= 1;
    if (!remaining) break;
    Bits next = power;
    next.or_shifted(power, span);
    power = std::move(next);
    span *= 2;
  }
  return result;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Naive: return "naive";
    case Engine::Bitmask: return "bitmask";
    case Engine::Convolution: return "conv";
  }
  return "unknown";
}

Engine parse_engine(const std::string& name) {
  if (name == "naive") return Engine::Naive;
  if (name == "bitmask") return Engine::Bitmask;
  if (name == "conv" || name == "convolution") return Engine::Convolution;
  throw Error(ErrorCode::InvalidArgument, "unknown engine '" + name + "'");
}

GridSet2D dilate_unit_block(const GridSet2D& s) {
  GridSet2D::Rows rows;
  for (const auto& [j, runs] : s.rows()) {
    std::vector<Run> grown;
    grown.reserve(runs.size());
    for (const Run& r : runs) grown.push_back({r.begin, r.end + 1});
    auto& lo = rows[j];
    lo.insert(lo.end(), grown.begin(), grown.end());
    auto& hi = rows[j + 1];
    hi.insert(hi.end(), grown.begin(), grown.end());
  }
  return GridSet2D(s.lattice(), std::move(rows));
}

GridSet2D minkowski_sum(const GridSet2D& a, const GridSet2D& b, Engine engine) {
  switch (engine) {
    case Engine::Naive: return minkowski_sum_naive(a, b);
    case Engine::Bitmask: return minkowski_sum_bitmask(a, b);
    case Engine::Convolution: return minkowski_sum_convolution(a, b);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown engine");
}

GridSet2D minkowski_sum_naive(const GridSet2D& a, const GridSet2D& b) {
  check_operands(a, b);
  GridSet2D::Box ba = a.bounds(), bb = b.bounds();
  Dense d;
  d.i0 = ba.i0 + bb.i0;
  d.j0 = ba.j0 + bb.j0;
  d.w = (ba.i1 - ba.i0) + (bb.i1 - bb.i0) + 1;
  d.h = (ba.j1 - ba.j0) + (bb.j1 - bb.j0) + 1;
  d.bits.assign(static_cast<std::size_t>(d.w * d.h), 0);
  auto ca = a.cells();
  auto cb = b.cells();
  for (auto [ia, ja] : ca)
    for (auto [ib, jb] : cb) {
      std::int64_t i = ia + ib, j = ja + jb;
      d.at(i, j) = 1;
      d.at(i + 1, j) = 1;
      d.at(i, j + 1) = 1;
      d.at(i + 1, j + 1) = 1;
    }
  return d.to_grid(a.lattice());
}

GridSet2D minkowski_sum_bitmask(const GridSet2D& a, const GridSet2D& b) {
  check_operands(a, b);
  // A + B = runs(A) (+) dilate(B); the operand with fewer runs drives the loop.
  auto run_total = [](const GridSet2D& s) {
    std::size_t n = 0;
    for (const auto& [j, r] : s.rows()) n += r.size();
    return n;
  };
  const bool swap = run_total(b) < run_total(a);
  const GridSet2D& driver = swap ? b : a;
  GridSet2D other = dilate_unit_block(swap ? a : b);

  GridSet2D::Box bd = driver.bounds(), bo = other.bounds();
  const std::int64_t ow = bo.i1 - bo.i0;
  const std::int64_t out_i0 = bd.i0 + bo.i0;
  const std::int64_t out_w = (bd.i1 - bd.i0) + ow;
  const std::int64_t out_j0 = bd.j0 + bo.j0;
  const std::int64_t out_h = (bd.j1 - bd.j0) + (bo.j1 - bo.j0);

  std::vector<std::pair<std::int64_t, Bits>> orows;
  orows.reserve(other.rows().size());
  for (const auto& [j, runs] : other.rows()) {
    Bits bits(ow);
    for (const Run& r : runs) bits.set_range(r.begin - bo.i0, r.end - bo.i0);
    orows.emplace_back(j, std::move(bits));
  }

  std::vector<Bits> out(static_cast<std::size_t>(out_h), Bits(out_w));
  std::vector<char> touched(static_cast<std::size_t>(out_h), 0);
  std::map<std::int64_t, std::vector<Bits>> cache;  // run length -> dilated other rows

  for (const auto& [jd, runs] : driver.rows()) {
    for (const Run& r : runs) {
      const std::int64_t len = r.length();
      auto it = cache.find(len);
      if (it == cache.end()) {
        std::vector<Bits> dil;
        dil.reserve(orows.size());
        for (const auto& [jo, bits] : orows) dil.push_back(len == 1 ? bits : dilate_bits(bits, len));
        it = cache.emplace(len, std::move(dil)).first;
      }
      const std::int64_t shift = r.begin - bd.i0;
      for (std::size_t k = 0; k < orows.size(); ++k) {
        std::size_t y = static_cast<std::size_t>(jd + orows[k].first - out_j0);
        out[y].or_shifted(it->second[k], shift);
        touched[y] = 1;
      }
    }
  }

  GridSet2D::Rows rows;
  for (std::int64_t y = 0; y < out_h; ++y) {
    if (!touched[static_cast<std::size_t>(y)]) continue;
    const Bits& bits = out[static_cast<std::size_t>(y)];
    std::vector<Run> result;
    for (std::int64_t k = bits.next(0, true); k < out_w;) {
      std::int64_t e = bits.next(k, false);
      result.push_back({out_i0 + k, out_i0 + e});
      k = bits.next(e, true);
    }
    if (!result.empty()) rows.emplace(out_j0 + y, std::move(result));
  }
  return GridSet2D(a.lattice(), std::move(rows));
}

GridSet2D minkowski_sum_convolution(const GridSet2D& a, const GridSet2D& b) {
  check_operands(a, b);
  GridSet2D::Box ba = a.bounds(), bb = b.bounds();
  const std::int64_t nx = (ba.i1 - ba.i0) + (bb.i1 - bb.i0) - 1;
  const std::int64_t ny = (ba.j1 - ba.j0) + (bb.j1 - bb.j0) - 1;
  const int n0 = static_cast<int>(ny), n1 = static_cast<int>(nx);
  const std::size_t real_n = static_cast<std::size_t>(nx * ny);
  const std::size_t cplx_n = static_cast<std::size_t>(ny * (nx / 2 + 1));

  double* fa = fftw_alloc_real(real_n);
  double* fb = fftw_alloc_real(real_n);
  fftw_complex* ca = fftw_alloc_complex(cplx_n);
  fftw_complex* cb = fftw_alloc_complex(cplx_n);
  std::fill(fa, fa + real_n, 0.0);
  std::fill(fb, fb + real_n, 0.0);
  for (auto [i, j] : a.cells()) fa[(j - ba.j0) * nx + (i - ba.i0)] = 1.0;
  for (auto [i, j] : b.cells()) fb[(j - bb.j0) * nx + (i - bb.i0)] = 1.0;

  fftw_plan pa, pb, pinv;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    pa = fftw_plan_dft_r2c_2d(n0, n1, fa, ca, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_2d(n0, n1, fb, cb, FFTW_ESTIMATE);
    pinv = fftw_plan_dft_c2r_2d(n0, n1, ca, fa, FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  const double norm = 1.0 / static_cast<double>(real_n);
  for (std::size_t k = 0; k < cplx_n; ++k) {
    double re = ca[k][0] * cb[k][0] - ca[k][1] * cb[k][1];
    double im = ca[k][0] * cb[k][1] + ca[k][1] * cb[k][0];
    ca[k][0] = re * norm;
    ca[k][1] = im * norm;
  }
  fftw_execute(pinv);

  GridSet2D::Rows rows;
  bool bad = false;
  for (std::int64_t y = 0; y < ny && !bad; ++y) {
    std::vector<Run> runs;
    for (std::int64_t x = 0; x < nx; ++x) {
      double v = fa[y * nx + x];
      if (std::fabs(v - std::round(v)) > 0.25) {
        bad = true;
        break;
      }
      if (v > 0.5) {
        std::int64_t i = ba.i0 + bb.i0 + x;
        if (!runs.empty() && runs.back().end == i) ++runs.back().end;
        else runs.push_back({i, i + 1});
      }
    }
    if (!runs.empty()) rows.emplace(ba.j0 + bb.j0 + y, std::move(runs));
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pinv);
  }
  fftw_free(fa);
  fftw_free(fb);
  fftw_free(ca);
  fftw_free(cb);
  if (bad) throw Error(ErrorCode::NumericalError, "convolution counts drifted from integers");
  return dilate_unit_block(GridSet2D(a.lattice(), std::move(rows)));
}

}  // namespace bmstab
