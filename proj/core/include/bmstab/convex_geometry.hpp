#pragma once

#include <vector>

#include "bmstab/affine.hpp"
#include "bmstab/lattice.hpp"

namespace bmstab {

/// Counterclockwise, no three consecutive vertices collinear, positive area.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

/// Monotone chain over exact rationals; throws DegenerateInput for fewer than
/// three non-collinear points.
ConvexPolygon convex_hull(std::vector<Vec2> points);

/// Hull of all cell corners; throws EmptySet.
ConvexPolygon hull(const GridSet2D& s);

/// Corners that determine the hull: the extreme corners of each row.
std::vector<Vec2> extreme_corners(const GridSet2D& s);

Rational polygon_area(const ConvexPolygon& p);
bool contains(const ConvexPolygon& p, const Vec2& x);
ConvexPolygon translate(const ConvexPolygon& p, const Vec2& v);
/// Polygon clipped to the half-plane n . x <= c (may have fewer than 3 vertices).
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& n, const Rational& c);
Rational shoelace(const std::vector<Vec2>& poly);

/// area(hull(S)) - measure(S).
Rational convexity_defect(const GridSet2D& s);

/// Exact |S ∩ P|.
Rational clip_measure(const GridSet2D& s, const ConvexPolygon& p);

/// Exact squared distance from a point to P (0 inside).
Rational squared_distance(const ConvexPolygon& p, const Vec2& x);

/// Exact max over occupied cells of the squared distance of the cell's far
/// corner to P.
Rational squared_distance_to_convex(const GridSet2D& s, const ConvexPolygon& p);
/// Rational upper bound (within `tol`) of the square root of the above.
Rational distance_to_convex(const GridSet2D& s, const ConvexPolygon& p, double tol = 1e-12);

struct Moments {
  Rational mass;
  Vec2 centroid;
  Rational xx, xy, yy;  // central second moments divided by mass
};

Moments second_moments(const GridSet2D& s);

/// Unit-determinant map M with M Sigma M^T proportional to the identity.
/// Throws DegenerateMoments.
AffineMap2D whitening_normalize(const GridSet2D& s, double tol = 1e-13);

/// Outer-containing polygon of the disk of radius r around the origin:
/// intersection of `segments` tangent half-planes with exact unit normals.
ConvexPolygon circumscribed_disk(const Rational& r, int segments = 32);

/// Minkowski sum of convex polygons.
ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q);

}  // namespace bmstab
