#include "bmstab/affine.hpp"

#include "bmstab/error.hpp"

namespace bmstab {

AffineMap2D::AffineMap2D() : AffineMap2D(identity()) {}

AffineMap2D::AffineMap2D(Matrix linear, Vec2 shift, bool measure_preserving)
    : linear_(std::move(linear)), shift_(std::move(shift)), measure_preserving_(measure_preserving) {
  if (measure_preserving_ && abs(det()) != 1)
    throw Error(ErrorCode::InvalidArgument, "measure-preserving map needs |det| = 1");
}

AffineMap2D AffineMap2D::identity() {
  AffineMap2D m = diagonal(1, 1);
  return m;
}

AffineMap2D AffineMap2D::translation(const Vec2& v) {
  AffineMap2D m = identity();
  m.shift_ = v;
  return m;
}

AffineMap2D AffineMap2D::diagonal(const Rational& sx, const Rational& sy) {
  Matrix a{{{sx, Rational(0)}, {Rational(0), sy}}};
  Rational d = sx * sy;
  return AffineMap2D(a, {Rational(0), Rational(0)}, abs(d) == 1);
}

AffineMap2D AffineMap2D::shear_y(const Rational& slope) {
  Matrix a{{{Rational(1), Rational(0)}, {slope, Rational(1)}}};
  return AffineMap2D(a, {Rational(0), Rational(0)}, true);
}

AffineMap2D AffineMap2D::rotation90() {
  Matrix a{{{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}}};
  return AffineMap2D(a, {Rational(0), Rational(0)}, true);
}

Rational AffineMap2D::det() const {
  return Rational(linear_[0][0] * linear_[1][1] - linear_[0][1] * linear_[1][0]);
}

Vec2 AffineMap2D::apply(const Vec2& p) const {
  return {Rational(linear_[0][0] * p.x + linear_[0][1] * p.y + shift_.x),
          Rational(linear_[1][0] * p.x + linear_[1][1] * p.y + shift_.y)};
}

bool AffineMap2D::linear_is_identity() const {
  return linear_[0][0] == 1 && linear_[0][1] == 0 && linear_[1][0] == 0 && linear_[1][1] == 1;
}

bool AffineMap2D::is_identity() const {
  return linear_is_identity() && shift_.x == 0 && shift_.y == 0;
}

AffineMap2D AffineMap2D::after(const AffineMap2D& inner) const {
  Matrix m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      m[r][c] = linear_[r][0] * inner.linear_[0][c] + linear_[r][1] * inner.linear_[1][c];
  Vec2 s = apply(inner.shift_);
  return AffineMap2D(m, s, measure_preserving_ && inner.measure_preserving_);
}

}  // namespace bmstab
