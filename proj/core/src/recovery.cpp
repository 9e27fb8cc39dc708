#include "bmstab/recovery.hpp"

#include "bmstab/error.hpp"

namespace bmstab {

RecoveryReport build_common_body(const NormalizedPair& normalized, double delta, const BodyOptions& opts) {
  const GridSet2D& a = normalized.a;
  const GridSet2D& b = normalized.b;
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "normalized pair has an empty side");

  RecoveryReport rep;
  rep.normalized = normalized;
  rep.delta = delta;
  rep.measureA = measure(a);
  rep.measureB = measure(b);
  rep.shiftU = {Rational(0), Rational(0)};
  rep.centroidOffset = centroid(b) - centroid(a);
  rep.shiftV = rep.centroidOffset;

  // The union hull only depends on the two hulls' vertices.
  const std::vector<Vec2> ha = hull(a).vertices, hb = hull(b).vertices;
  auto union_hull = [&](const Vec2& v) {
    std::vector<Vec2> pts = ha;
    for (const Vec2& p : hb) pts.push_back(p - v);
    return convex_hull(std::move(pts));
  };
  rep.C = union_hull(rep.shiftV);
  if (opts.alignment == Alignment::Refined) {
    Rational best = polygon_area(rep.C);
    Rational step = min(a.lattice().cell_width(), a.lattice().cell_height());
    for (int level = 0; level < opts.refineLevels; ++level, step /= 2) {
      for (bool improved = true; improved;) {
        improved = false;
        for (const Vec2& d : {Vec2{step, Rational(0)}, Vec2{Rational(-step), Rational(0)}, Vec2{Rational(0), step},
                              Vec2{Rational(0), Rational(-step)}}) {
          Vec2 v = rep.shiftV + d;
          ConvexPolygon c = union_hull(v);
          Rational area = polygon_area(c);
          if (area < best) {
            best = area;
            rep.shiftV = v;
            rep.C = std::move(c);
            improved = true;
          }
        }
      }
    }
  }

  Rational ra = distance_to_convex(a, translate(rep.C, rep.shiftU), opts.distanceTolerance);
  Rational rb = distance_to_convex(b, translate(rep.C, rep.shiftV), opts.distanceTolerance);
  rep.rho = max(ra, rb);
  rep.K = rep.rho > 0 ? minkowski_sum(rep.C, circumscribed_disk(rep.rho, opts.arcSegments)) : rep.C;
  rep.areaK = polygon_area(rep.K);

  rep.insideA = clip_measure(a, translate(rep.K, rep.shiftU));
  rep.insideB = clip_measure(b, translate(rep.K, rep.shiftV));
  rep.containsA = rep.insideA == rep.measureA;
  rep.containsB = rep.insideB == rep.measureB;
  const Rational m = max(rep.measureA, rep.measureB);
  rep.epsilonA = (rep.areaK - rep.insideA) / m;
  rep.epsilonB = (rep.areaK - rep.insideB) / m;

  rep.defectA = convexity_defect(a);
  rep.defectB = convexity_defect(b);
  try {
    rep.whitening = whitening_normalize(a);
  } catch (const Error&) {
    rep.whitening.reset();
  }
  return rep;
}

RecoveryReport recover(const GridSet2D& a, const GridSet2D& b, const Rational& t, const PipelineConfig& cfg,
                       const BodyOptions& opts) {
  DeficitReport d = deficit(a, b, t, cfg.sum);
  NormalizedPair n = normalize_full(a, b, t, cfg);
  RecoveryReport rep;
  try {
    rep = build_common_body(n, d.deltaMult, opts);
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("build_common_body", e.code(), e.what());
  }
  rep.deficit = d;
  return rep;
}

}  // namespace bmstab
