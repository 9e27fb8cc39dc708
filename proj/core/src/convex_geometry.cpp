#include "bmstab/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bmstab/error.hpp"

namespace bmstab {

namespace {

Rational cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return Rational((a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x));
}

Rational dot(const Vec2& a, const Vec2& b) { return Rational(a.x * b.x + a.y * b.y); }

std::vector<Vec2> clip_axis(const std::vector<Vec2>& poly, bool use_x, const Rational& lo, const Rational& hi) {
  Vec2 n = use_x ? Vec2{Rational(1), Rational(0)} : Vec2{Rational(0), Rational(1)};
  Vec2 m = use_x ? Vec2{Rational(-1), Rational(0)} : Vec2{Rational(0), Rational(-1)};
  return clip_half_plane(clip_half_plane(poly, n, hi), m, Rational(-lo));
}

}  // namespace

ConvexPolygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw Error(ErrorCode::DegenerateInput, "hull needs three non-collinear points");
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw Error(ErrorCode::DegenerateInput, "points are collinear");
  return {std::move(h)};
}

std::vector<Vec2> extreme_corners(const GridSet2D& s) {
  const Rational w = s.lattice().cell_width(), h = s.lattice().cell_height();
  std::vector<Vec2> pts;
  pts.reserve(s.rows().size() * 4);
  for (const auto& [j, runs] : s.rows()) {
    Rational x0 = w * runs.front().begin, x1 = w * runs.back().end;
    Rational y0 = h * j, y1 = h * (j + 1);
    pts.push_back({x0, y0});
    pts.push_back({x0, y1});
    pts.push_back({x1, y0});
    pts.push_back({x1, y1});
  }
  return pts;
}

ConvexPolygon hull(const GridSet2D& s) {
  if (s.empty()) throw Error(ErrorCode::EmptySet, "hull of an empty set");
  return convex_hull(extreme_corners(s));
}

Rational shoelace(const std::vector<Vec2>& poly) {
  Rational twice = 0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return Rational(twice / 2);
}

Rational polygon_area(const ConvexPolygon& p) { return shoelace(p.vertices); }

bool contains(const ConvexPolygon& p, const Vec2& x) {
  for (std::size_t i = 0, n = p.vertices.size(); i < n; ++i)
    if (cross(p.vertices[i], p.vertices[(i + 1) % n], x) < 0) return false;
  return true;
}

ConvexPolygon translate(const ConvexPolygon& p, const Vec2& v) {
  ConvexPolygon out;
  out.vertices.reserve(p.vertices.size());
  for (const Vec2& x : p.vertices) out.vertices.push_back(x + v);
  return out;
}

std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& n, const Rational& c) {
  std::vector<Vec2> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % m];
    Rational fp = dot(n, p) - c, fq = dot(n, q) - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      Rational s = fp / (fp - fq);
      out.push_back({Rational(p.x + s * (q.x - p.x)), Rational(p.y + s * (q.y - p.y))});
    }
  }
  return out;
}

Rational convexity_defect(const GridSet2D& s) { return polygon_area(hull(s)) - measure(s); }

Rational clip_measure(const GridSet2D& s, const ConvexPolygon& p) {
  if (s.empty()) return 0;
  const Rational w = s.lattice().cell_width(), h = s.lattice().cell_height();
  Rational pymin = p.vertices.front().y, pymax = pymin;
  for (const Vec2& v : p.vertices) {
    pymin = min(pymin, v.y);
    pymax = max(pymax, v.y);
  }
  Rational total = 0;
  for (const auto& [j, runs] : s.rows()) {
    Rational y0 = h * j, y1 = h * (j + 1);
    if (y1 <= pymin || y0 >= pymax) continue;
    std::vector<Vec2> strip = clip_axis(p.vertices, false, y0, y1);
    if (strip.size() < 3) continue;
    Rational sx0 = strip.front().x, sx1 = sx0;
    for (const Vec2& v : strip) {
      sx0 = min(sx0, v.x);
      sx1 = max(sx1, v.x);
    }
    for (const Run& r : runs) {
      Rational x0 = w * r.begin, x1 = w * r.end;
      if (x1 <= sx0 || x0 >= sx1) continue;
      if (x0 <= sx0 && x1 >= sx1) {
        total += shoelace(strip);
        continue;
      }
      std::vector<Vec2> piece = clip_axis(strip, true, x0, x1);
      if (piece.size() >= 3) total += shoelace(piece);
    }
  }
  return total;
}

Rational squared_distance(const ConvexPolygon& p, const Vec2& x) {
  if (contains(p, x)) return 0;
  Rational best = -1;
  for (std::size_t i = 0, n = p.vertices.size(); i < n; ++i) {
    const Vec2& a = p.vertices[i];
    const Vec2& b = p.vertices[(i + 1) % n];
    Vec2 ab = b - a, ax = x - a;
    Rational len = dot(ab, ab);
    Rational s = dot(ax, ab) / len;
    if (s < 0) s = 0;
    if (s > 1) s = 1;
    Vec2 proj = a + s * ab;
    Vec2 d = x - proj;
    Rational dd = dot(d, d);
    if (best < 0 || dd < best) best = dd;
  }
  return best;
}

Rational squared_distance_to_convex(const GridSet2D& s, const ConvexPolygon& p) {
  // Distance to a convex set is convex, so over each row's bounding rectangle
  // the maximum sits at one of its corners, all of which are occupied-cell corners.
  Rational best = 0;
  for (const Vec2& c : extreme_corners(s)) best = max(best, squared_distance(p, c));
  return best;
}

Rational distance_to_convex(const GridSet2D& s, const ConvexPolygon& p, double tol) {
  Rational sq = squared_distance_to_convex(s, p);
  if (auto r = exact_sqrt(sq)) return *r;
  Rational r = approximate_above(std::sqrt(to_double(sq)), tol);
  // Guard against double rounding below the true root.
  while (r * r < sq) r += Rational(tol);
  return r;
}

Moments second_moments(const GridSet2D& s) {
  if (s.empty()) throw Error(ErrorCode::DegenerateMoments, "moments of an empty set");
  const Rational w = s.lattice().cell_width(), h = s.lattice().cell_height();
  Rational m = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [j, runs] : s.rows()) {
    Rational y0 = h * j, y1 = h * (j + 1);
    Rational ly = y1 - y0, iy = (y1 * y1 - y0 * y0) / 2, iyy = (y1 * y1 * y1 - y0 * y0 * y0) / 3;
    for (const Run& r : runs) {
      Rational x0 = w * r.begin, x1 = w * r.end;
      Rational lx = x1 - x0, ix = (x1 * x1 - x0 * x0) / 2, ixx = (x1 * x1 * x1 - x0 * x0 * x0) / 3;
      m += lx * ly;
      sx += ix * ly;
      sy += lx * iy;
      sxx += ixx * ly;
      sxy += ix * iy;
      syy += lx * iyy;
    }
  }
  Moments mo;
  mo.mass = m;
  mo.centroid = {Rational(sx / m), Rational(sy / m)};
  mo.xx = sxx / m - mo.centroid.x * mo.centroid.x;
  mo.xy = sxy / m - mo.centroid.x * mo.centroid.y;
  mo.yy = syy / m - mo.centroid.y * mo.centroid.y;
  return mo;
}

AffineMap2D whitening_normalize(const GridSet2D& s, double tol) {
  Moments mo = second_moments(s);
  const Rational det = mo.xx * mo.yy - mo.xy * mo.xy;
  const Rational tr = mo.xx + mo.yy;
  if (det <= 0 || to_double(Rational(det / (tr * tr))) < 1e-12)
    throw Error(ErrorCode::DegenerateMoments, "second-moment matrix is singular at this resolution");
  // M = (Sigma + sI) / (sqrt(s) tau) with s = sqrt(det), tau = sqrt(tr + 2s);
  // one entry is then solved for so that det M = 1 holds exactly.
  const long double a = to_long_double(mo.xx), b = to_long_double(mo.xy), d = to_long_double(mo.yy);
  const long double sq = std::sqrt(a * d - b * b);
  const long double tau = std::sqrt(a + d + 2 * sq);
  const long double scale = 1.0L / (std::sqrt(sq) * tau);
  const long double m11 = (d + sq) * scale, m12 = -b * scale;
  Rational r11 = approximate(static_cast<double>(m11), tol * static_cast<double>(m11));
  Rational r12 = b == 0 ? Rational(0) : approximate(static_cast<double>(m12), tol * std::fabs(static_cast<double>(m11)));
  Rational r22 = (1 + r12 * r12) / r11;
  AffineMap2D::Matrix lin{{{r11, r12}, {r12, r22}}};
  return AffineMap2D(lin, {Rational(0), Rational(0)}, true);
}

ConvexPolygon circumscribed_disk(const Rational& r, int segments) {
  segments = std::max(segments, 16);
  std::vector<Vec2> normals;
  normals.reserve(static_cast<std::size_t>(segments));
  for (int k = 1; k <= segments; ++k) {
    const double theta = -std::numbers::pi + 2 * std::numbers::pi * k / segments;
    if (k == segments) {
      normals.push_back({Rational(-1), Rational(0)});
      continue;
    }
    // Rational point on the unit circle from the half-angle tangent.
    Rational m = approximate(std::tan(theta / 2), 1e-9);
    Rational den = 1 + m * m;
    normals.push_back({Rational((1 - m * m) / den), Rational(2 * m / den)});
  }
  std::vector<Vec2> verts;
  for (std::size_t k = 0; k < normals.size(); ++k) {
    const Vec2& u = normals[k];
    const Vec2& v = normals[(k + 1) % normals.size()];
    Rational det = u.x * v.y - u.y * v.x;
    verts.push_back({Rational(r * (v.y - u.y) / det), Rational(r * (u.x - v.x) / det)});
  }
  return convex_hull(verts);
}

ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Vec2> pts;
  pts.reserve(p.vertices.size() * q.vertices.size());
  for (const Vec2& a : p.vertices)
    for (const Vec2& b : q.vertices) pts.push_back(a + b);
  return convex_hull(std::move(pts));
}

}  // namespace bmstab
