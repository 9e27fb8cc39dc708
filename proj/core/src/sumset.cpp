#include <cmath>
#include <limits>

#include "bmstab/error.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

namespace {

BigInt to_big(std::int64_t v) { return BigInt(std::to_string(v)); }

long double log_rational(const Rational& r) {
  // log(n/d) computed through mpz scaling so huge counts stay accurate.
  long exp_n = 0, exp_d = 0;
  double mn = mpz_get_d_2exp(&exp_n, r.get_num_mpz_t());
  double md = mpz_get_d_2exp(&exp_d, r.get_den_mpz_t());
  return std::log(static_cast<long double>(mn)) - std::log(static_cast<long double>(md)) +
         static_cast<long double>(exp_n - exp_d) * std::log(2.0L);
}

std::optional<BigInt> exact_root(const BigInt& v, unsigned long k) {
  BigInt r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}

std::int64_t max_column_height(const std::map<std::int64_t, std::vector<Run>>& cols,
                               std::int64_t from, std::int64_t to) {
  std::int64_t best = 0;
  for (auto it = cols.lower_bound(from); it != cols.end() && it->first < to; ++it) {
    std::int64_t n = 0;
    for (const Run& r : it->second) n += r.length();
    best = std::max(best, n);
  }
  return best;
}

}  // namespace

TParts split_t(const Rational& t, std::int64_t max_den) {
  if (t <= 0 || t >= 1) throw Error(ErrorCode::InvalidT, "t = " + to_string(t) + " is not in (0,1)");
  if (t.get_den() > max_den)
    throw Error(ErrorCode::InvalidT, "denominator of t = " + to_string(t) + " exceeds " +
                                         std::to_string(max_den));
  return {t.get_num().get_si(), t.get_den().get_si()};
}

GridSet2D scale_cells(const GridSet2D& s, std::int64_t k, std::int64_t den) {
  const LatticeSpec& l = s.lattice();
  LatticeSpec fine(l.hx, l.hy, l.q * den);
  GridSet2D::Rows rows;
  for (const auto& [j, runs] : s.rows()) {
    std::vector<Run> scaled;
    scaled.reserve(runs.size());
    for (const Run& r : runs) scaled.push_back({r.begin * k, r.end * k});
    for (std::int64_t d = 0; d < k; ++d) rows.emplace(j * k + d, scaled);
  }
  return GridSet2D(fine, std::move(rows));
}

GridSet2D scaled_sum(const GridSet2D& a, const GridSet2D& b, const Rational& t, const SumOptions& opts) {
  TParts tp = split_t(t, opts.max_t_denominator);
  if (!(a.lattice() == b.lattice()))
    throw Error(ErrorCode::LatticeMismatch, "scaled_sum operands live on different lattices");
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyOperand, "scaled_sum of an empty set");
  return minkowski_sum(scale_cells(a, tp.p, tp.q), scale_cells(b, tp.q - tp.p, tp.q), opts.engine);
}

std::optional<Rational> exact_geometric_mean(const Rational& ma, const Rational& mb, const TParts& t) {
  if (ma == mb) return ma;
  BigInt num, den, tmp;
  const unsigned long p = static_cast<unsigned long>(t.p), r = static_cast<unsigned long>(t.q - t.p);
  mpz_pow_ui(num.get_mpz_t(), ma.get_num_mpz_t(), p);
  mpz_pow_ui(tmp.get_mpz_t(), mb.get_num_mpz_t(), r);
  num *= tmp;
  mpz_pow_ui(den.get_mpz_t(), ma.get_den_mpz_t(), p);
  mpz_pow_ui(tmp.get_mpz_t(), mb.get_den_mpz_t(), r);
  den *= tmp;
  auto rn = exact_root(num, static_cast<unsigned long>(t.q));
  auto rd = exact_root(den, static_cast<unsigned long>(t.q));
  if (!rn || !rd) return std::nullopt;
  Rational out(*rn, *rd);
  out.canonicalize();
  return out;
}

double geometric_mean(const Rational& ma, const Rational& mb, const Rational& t) {
  if (ma == mb) return to_double(ma);
  long double lt = to_long_double(t);
  return static_cast<double>(std::exp(lt * log_rational(ma) + (1.0L - lt) * log_rational(mb)));
}

DeficitReport deficit(const GridSet2D& a, const GridSet2D& b, const Rational& t, const SumOptions& opts) {
  TParts tp = split_t(t, opts.max_t_denominator);
  DeficitReport rep;
  rep.t = t;
  GridSet2D s = scaled_sum(a, b, t, opts);
  rep.measureA = measure(a);
  rep.measureB = measure(b);
  rep.measureS = measure(s);
  rep.measureSum = measure(minkowski_sum(a, b, opts.engine));
  const Rational mx = max(rep.measureA, rep.measureB);
  rep.ratioAB = to_double(Rational(rep.measureA / rep.measureB));

  if (auto g = exact_geometric_mean(rep.measureA, rep.measureB, tp)) {
    Rational d = (rep.measureS - *g) / mx;
    rep.deltaMultExact = d;
    rep.deltaMult = to_double(d);
  } else {
    long double lt = to_long_double(t);
    long double lg = lt * log_rational(rep.measureA) + (1.0L - lt) * log_rational(rep.measureB);
    long double ls = log_rational(rep.measureS);
    // |S| - G = G (exp(log|S| - log G) - 1), which avoids cancellation near equality.
    long double geo = std::exp(lg);
    long double diff = geo * std::expm1(ls - lg);
    rep.deltaMult = static_cast<double>(diff / to_long_double(mx));
  }

  // Normalizing by max first keeps commensurate cases (A = B, homothetic squares) exact.
  auto sa = exact_sqrt(Rational(rep.measureA / mx)), sb = exact_sqrt(Rational(rep.measureB / mx)),
       ss = exact_sqrt(Rational(rep.measureSum / mx));
  if (sa && sb && ss) {
    Rational d = *ss - *sa - *sb;
    rep.deltaAddExact = d;
    rep.deltaAdd = to_double(d);
  } else {
    long double ra = std::sqrt(to_long_double(rep.measureA));
    long double rb = std::sqrt(to_long_double(rep.measureB));
    long double rs = std::sqrt(to_long_double(rep.measureSum));
    rep.deltaAdd = static_cast<double>((rs - ra - rb) / std::sqrt(to_long_double(mx)));
  }
  return rep;
}

BmCertificate bm_certificate(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                             const SumOptions& opts) {
  BmCertificate c;
  c.t = split_t(t, opts.max_t_denominator);
  GridSet2D s = scaled_sum(a, b, t, opts);
  const std::int64_t q2 = c.t.q * c.t.q;
  c.countS = to_big(s.cell_count());
  c.countA = to_big(a.cell_count()) * to_big(q2);
  c.countB = to_big(b.cell_count()) * to_big(q2);
  BigInt lhs, ra, rb;
  mpz_pow_ui(lhs.get_mpz_t(), c.countS.get_mpz_t(), static_cast<unsigned long>(c.t.q));
  mpz_pow_ui(ra.get_mpz_t(), c.countA.get_mpz_t(), static_cast<unsigned long>(c.t.p));
  mpz_pow_ui(rb.get_mpz_t(), c.countB.get_mpz_t(), static_cast<unsigned long>(c.t.q - c.t.p));
  BigInt rhs = ra * rb;
  c.holds = lhs >= rhs;
  c.equality = lhs == rhs;
  return c;
}

bool verify_bm_exact(const GridSet2D& a, const GridSet2D& b, const Rational& t, const SumOptions& opts) {
  return bm_certificate(a, b, t, opts).holds;
}

Localized2DReport localized_deficit_2d(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                                       std::int64_t c0, std::int64_t c1, const Localized2DOptions& opts) {
  if (c0 >= c1) throw Error(ErrorCode::InvalidArgument, "window needs c0 < c1");
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyOperand, "localized deficit of an empty set");
  const Rational lo = 1 - opts.measureBand, hi = 1 + opts.measureBand;
  const Rational ma = measure(a), mb = measure(b);
  if (ma < lo || ma > hi || mb < lo || mb > hi)
    throw Error(ErrorCode::HypothesisNotSatisfied,
                "measure band: |A| = " + to_string(ma) + ", |B| = " + to_string(mb) +
                    " must lie within " + to_string(opts.measureBand) + " of 1");

  auto ca = column_runs(a);
  auto cb = column_runs(b);
  auto height = [](const std::vector<Run>& runs) {
    std::int64_t n = 0;
    for (const Run& r : runs) n += r.length();
    return n;
  };
  const std::int64_t a_last = height(ca.rbegin()->second);
  const std::int64_t a_first = height(ca.begin()->second);
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  const std::int64_t right = max_column_height(cb, c1, inf);
  const std::int64_t left = max_column_height(cb, std::numeric_limits<std::int64_t>::min(), c0);
  if (a_last < right)
    throw Error(ErrorCode::HypothesisNotSatisfied,
                "right tail: last column of A has " + std::to_string(a_last) +
                    " cells but a column of B at or beyond c1 has " + std::to_string(right));
  if (a_first < left)
    throw Error(ErrorCode::HypothesisNotSatisfied,
                "left tail: first column of A has " + std::to_string(a_first) +
                    " cells but a column of B before c0 has " + std::to_string(left));

  GridSet2D bt = clip_columns(b, c0, c1);
  if (bt.empty()) throw Error(ErrorCode::EmptyOperand, "window removes all of B");

  Localized2DReport rep;
  rep.c0 = c0;
  rep.c1 = c1;
  rep.full = deficit(a, b, t, opts.sum);
  rep.measureBTilde = measure(bt);
  rep.removedMass = mb - rep.measureBTilde;
  rep.measureSTilde = measure(scaled_sum(a, bt, t, opts.sum));
  rep.powerTilde = geometric_mean(ma, rep.measureBTilde, t);
  rep.localizedGap = to_double(rep.measureSTilde) - rep.powerTilde;
  rep.sumDrop = rep.full.measureS - rep.measureSTilde;
  rep.requiredDrop = (1 - t) * rep.removedMass;
  rep.dropSlack = rep.sumDrop - rep.requiredDrop;
  rep.dropHolds = rep.dropSlack >= 0;
  return rep;
}

}  // namespace bmstab
