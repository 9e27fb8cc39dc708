#include "bmstab/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "bmstab/error.hpp"

namespace bmstab {

namespace {

// Continued-fraction convergents of an exact rational, call `accept` on each
// until it returns true. The last convergent is the value itself.
template <typename Accept>
Rational walk_convergents(const Rational& exact, Accept accept) {
  BigInt num = exact.get_num();
  BigInt den = exact.get_den();
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  while (den != 0) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    BigInt p2 = a * p1 + p0;
    BigInt q2 = a * q1 + q0;
    Rational c(p2, q2);
    c.canonicalize();
    if (accept(c)) return c;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    BigInt rem = num - a * den;
    num = den;
    den = rem;
  }
  return exact;
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  auto digits_ok = [](const std::string& part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  std::string sign_stripped = (s[0] == '+') ? s.substr(1) : s;
  if (auto slash = sign_stripped.find('/'); slash != std::string::npos) {
    std::string n = sign_stripped.substr(0, slash), d = sign_stripped.substr(slash + 1);
    if (!digits_ok(n, true) || !digits_ok(d, false))
      throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
    BigInt bn(n), bd(d);
    if (bd == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    Rational r(bn, bd);
    r.canonicalize();
    return r;
  }
  if (auto dot = sign_stripped.find('.'); dot != std::string::npos) {
    std::string ip = sign_stripped.substr(0, dot), fp = sign_stripped.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    if (!digits_ok(ip, false) || (!fp.empty() && !digits_ok(fp, false)))
      throw Error(ErrorCode::ParseError, "bad decimal '" + s + "'");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    BigInt n = BigInt(ip) * scale + (fp.empty() ? BigInt(0) : BigInt(fp));
    if (neg) n = -n;
    Rational r(n, scale);
    r.canonicalize();
    return r;
  }
  if (!digits_ok(sign_stripped, true)) throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
  return Rational(BigInt(sign_stripped));
}

std::string to_string(const Rational& r, bool always_slash) {
  if (!always_slash && r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

long double to_long_double(const Rational& r) {
  // Split off the integer part so large numerators do not lose the fraction.
  BigInt ip;
  mpz_tdiv_q(ip.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  Rational frac = r - Rational(ip);
  long double hi = std::stold(ip.get_str());
  BigInt scaled;
  BigInt two64;
  mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
  Rational f64 = frac * Rational(two64);
  mpz_tdiv_q(scaled.get_mpz_t(), f64.get_num_mpz_t(), f64.get_den_mpz_t());
  return hi + std::ldexp(std::stold(scaled.get_str()), -64);
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NumericalError, "non-finite double");
  Rational r(x);
  return r;
}

Rational approximate(double x, double tol) {
  Rational exact = from_double(x);
  return walk_convergents(exact, [&](const Rational& c) {
    return std::fabs(to_double(c - exact)) <= tol;
  });
}

Rational approximate_above(double x, double tol) {
  Rational exact = from_double(x);
  return walk_convergents(exact, [&](const Rational& c) {
    return c >= exact && to_double(c - exact) <= tol;
  });
}

std::int64_t floor_to_i64(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  if (!q.fits_slong_p()) throw Error(ErrorCode::NumericalError, "integer overflow");
  return q.get_si();
}

std::int64_t ceil_to_i64(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  if (!q.fits_slong_p()) throw Error(ErrorCode::NumericalError, "integer overflow");
  return q.get_si();
}

std::int64_t round_half_up(const Rational& r) {
  Rational h = r + Rational(1, 2);
  return floor_to_i64(h);
}

std::int64_t round_half_down(const Rational& r) {
  Rational h = r - Rational(1, 2);
  return ceil_to_i64(h);
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t()))
    return std::nullopt;
  BigInt n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
  Rational out(n, d);
  out.canonicalize();
  return out;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace bmstab
