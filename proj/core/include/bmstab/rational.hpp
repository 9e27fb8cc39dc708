#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bmstab {

// Exact arithmetic throughout the library. gmpxx uses expression templates,
// so always spell the result type out instead of writing `auto x = a + b`.
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Parses "p/q", "p" or a plain decimal such as "0.25". Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print as "p/1" when `always_slash` is set.
std::string to_string(const Rational& r, bool always_slash = false);

double to_double(const Rational& r);
long double to_long_double(const Rational& r);

/// Exact binary value of a finite double.
Rational from_double(double x);

/// Best rational approximation with |result - x| <= tol (continued fractions).
Rational approximate(double x, double tol);

/// Like approximate() but guaranteed to be >= x.
Rational approximate_above(double x, double tol);

std::int64_t floor_to_i64(const Rational& r);
std::int64_t ceil_to_i64(const Rational& r);

/// Nearest integer, ties resolved upward (floor(r + 1/2)).
std::int64_t round_half_up(const Rational& r);
/// Nearest integer, ties resolved downward (ceil(r - 1/2)).
std::int64_t round_half_down(const Rational& r);

/// Square root when both numerator and denominator are perfect squares.
std::optional<Rational> exact_sqrt(const Rational& r);

Rational abs(const Rational& r);

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace bmstab
