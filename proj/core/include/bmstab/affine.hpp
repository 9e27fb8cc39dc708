#pragma once

#include <array>

#include "bmstab/rational.hpp"

namespace bmstab {

struct Vec2 {
  Rational x;
  Rational y;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {Rational(a.x + b.x), Rational(a.y + b.y)}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {Rational(a.x - b.x), Rational(a.y - b.y)}; }
inline Vec2 operator*(const Rational& s, const Vec2& a) { return {Rational(s * a.x), Rational(s * a.y)}; }

/// x -> linear * x + shift.
class AffineMap2D {
 public:
  using Matrix = std::array<std::array<Rational, 2>, 2>;

  AffineMap2D();
  /// Throws InvalidArgument when `measure_preserving` is set but |det| != 1.
  AffineMap2D(Matrix linear, Vec2 shift, bool measure_preserving);

  static AffineMap2D identity();
  static AffineMap2D translation(const Vec2& v);
  static AffineMap2D diagonal(const Rational& sx, const Rational& sy);
  /// (x, y) -> (x, y + slope * x).
  static AffineMap2D shear_y(const Rational& slope);
  /// (x, y) -> (-y, x).
  static AffineMap2D rotation90();

  const Matrix& linear() const { return linear_; }
  const Vec2& shift() const { return shift_; }
  bool measure_preserving() const { return measure_preserving_; }

  Rational det() const;
  Vec2 apply(const Vec2& p) const;
  bool is_identity() const;
  bool linear_is_identity() const;

  /// (this ∘ inner)(x) = this(inner(x)).
  AffineMap2D after(const AffineMap2D& inner) const;

  friend bool operator==(const AffineMap2D& a, const AffineMap2D& b) {
    return a.linear_ == b.linear_ && a.shift_ == b.shift_;
  }

 private:
  Matrix linear_;
  Vec2 shift_;
  bool measure_preserving_ = true;
};

}  // namespace bmstab
