#include "bmstab/structure_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bmstab/error.hpp"
#include "bmstab/interval1d.hpp"

namespace bmstab {

namespace {

template <typename F>
auto run_stage(const std::string& pass, const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(pass + "/" + name, e.code(), e.what());
  }
}

Rational lower_median(std::vector<Rational> v) {
  std::size_t mid = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

std::int64_t clamp_i64(std::int64_t v, std::int64_t lo, std::int64_t hi) { return std::max(lo, std::min(v, hi)); }

Set1D column_set(const std::map<std::int64_t, std::vector<Run>>& cols, std::int64_t i, const Rational& scale) {
  auto it = cols.find(i);
  if (it == cols.end()) return Set1D(scale);
  return Set1D(scale, it->second);
}

Rational overlap(const Rational& a0, const Rational& a1, const Rational& b0, const Rational& b1) {
  Rational lo = max(a0, b0), hi = min(a1, b1);
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

struct PassOutput {
  GridSet2D a, b;
  AffineMap2D mapA, mapB;
  PassReport report;
  OmegaDiagnostic omega;
};

OmegaDiagnostic omega_diagnostic(const SliceFit& fit, const Rational& t, const Rational& w, const PipelineConfig& cfg) {
  OmegaDiagnostic d;
  std::vector<const ColumnRecord*> admitted;
  std::set<std::int64_t> colsA, colsB;
  for (const auto& r : fit.columns)
    if (r.admitted) {
      admitted.push_back(&r);
      colsA.insert(r.colA);
      colsB.insert(r.colB);
    }
  d.productMeasure = Rational(w * static_cast<long>(colsA.size())) * Rational(w * static_cast<long>(colsB.size()));
  if (admitted.empty() || cfg.omegaPairSamples <= 0) return d;
  std::mt19937_64 rng(cfg.omegaSeed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto combined = [&](std::int64_t ca, std::int64_t cb) {
    return Rational(t * fit.centersPhi.at(ca) + (1 - t) * fit.centersPsi.at(cb));
  };
  for (int s = 0; s < cfg.omegaPairSamples; ++s) {
    const ColumnRecord* r1 = admitted[pick(admitted.size())];
    const ColumnRecord* r2 = admitted[pick(admitted.size())];
    ++d.samples;
    Rational y = t * (r1->colA + Rational(1, 2)) + (1 - t) * (r2->colB + Rational(1, 2));
    std::int64_t ky = floor_to_i64(y);
    bool bad = true;
    if (ky >= 0 && ky < static_cast<std::int64_t>(fit.columns.size()) && fit.columns[static_cast<std::size_t>(ky)].admitted) {
      const ColumnRecord& ry = fit.columns[static_cast<std::size_t>(ky)];
      bad = abs(Rational(combined(r1->colA, r2->colB) - combined(ry.colA, ry.colB))) >= 2;
    }
    if (bad) ++d.bad;
  }
  d.badMeasure = to_double(d.productMeasure) * d.bad / d.samples;
  return d;
}

PassOutput run_pass(const GridSet2D& a, const GridSet2D& b, const Rational& t, const PipelineConfig& cfg,
                    const std::string& label) {
  PassOutput out;
  PassReport& rep = out.report;
  rep.label = label;
  rep.deficit = run_stage(label, "deficit", [&] { return deficit(a, b, t, cfg.sum); });
  const double delta = std::max(0.0, rep.deficit.deltaMult);
  if (delta > cfg.maxDelta)
    throw StageError(label + "/deficit", ErrorCode::DeficitTooLarge,
                     "deltaMult " + std::to_string(delta) + " exceeds " + std::to_string(cfg.maxDelta));

  rep.vertical = run_stage(label, "vertical_normalize", [&] { return vertical_normalize(a, b, cfg); });
  rep.projection = run_stage(label, "projection_bound", [&] {
    return projection_bound_report(rep.vertical.a, rep.vertical.b, cfg.projectionBound);
  });
  rep.selection = run_stage(label, "select_level_intervals", [&] {
    return select_level_intervals(rep.vertical.a, rep.vertical.b, t, delta, cfg);
  });
  rep.aligned = run_stage(label, "align_projections", [&] {
    return align_projections(rep.vertical.a, rep.vertical.b, rep.selection);
  });
  rep.truncation = run_stage(label, "truncate_sharp", [&] {
    return truncate_sharp(rep.aligned.a, rep.aligned.b, std::max(rep.aligned.cellsA, rep.aligned.cellsB), t, cfg.sum);
  });
  rep.fit = run_stage(label, "fit_slice_intervals", [&] {
    return fit_slice_intervals(rep.truncation.a, rep.truncation.b, t, delta, rep.aligned.cellsA, rep.aligned.cellsB,
                               cfg);
  });
  const Rational w = rep.truncation.a.lattice().cell_width();
  std::vector<Point2> pa = center_points(rep.fit.centersPhi, w);
  std::vector<Point2> pb = center_points(rep.fit.centersPsi, w);
  rep.fitA = run_stage(label, "robust_affine_fit", [&] { return robust_affine_fit(pa, cfg.inlierTolerance); });
  rep.fitB = run_stage(label, "robust_affine_fit", [&] { return robust_affine_fit(pb, cfg.inlierTolerance); });
  rep.shear = run_stage(label, "shear_normalize", [&] {
    return shear_normalize(rep.aligned.a, rep.aligned.b, rep.fitA, rep.fitB, pa, pb, cfg);
  });
  out.omega = omega_diagnostic(rep.fit, t, w, cfg);

  out.a = rep.shear.a;
  out.b = rep.shear.b;
  out.mapA = rep.shear.mapA.after(rep.aligned.mapA.after(rep.vertical.map));
  out.mapB = rep.shear.mapB.after(rep.aligned.mapB.after(rep.vertical.map));
  return out;
}

Rational full_radius(const GridSet2D& s, const Vec2& c) {
  GridSet2D::Box bx = s.bounds();
  const Rational w = s.lattice().cell_width(), h = s.lattice().cell_height();
  Rational r = max(Rational(c.x - w * bx.i0), Rational(w * bx.i1 - c.x));
  r = max(r, max(Rational(c.y - h * bx.j0), Rational(h * bx.j1 - c.y)));
  return r;
}

}  // namespace

AlignedPair align_projections(const GridSet2D& a, const GridSet2D& b, const LevelSelection& sel) {
  AlignedPair out;
  out.shiftA = -sel.intervalI.begin;
  out.shiftB = -sel.intervalJ.begin;
  out.a = translate(a, out.shiftA, 0);
  out.b = translate(b, out.shiftB, 0);
  out.cellsA = sel.intervalI.length();
  out.cellsB = sel.intervalJ.length();
  out.lengthA = a.lattice().cell_width() * out.cellsA;
  out.lengthB = b.lattice().cell_width() * out.cellsB;
  out.gap = abs(Rational(out.lengthA - out.lengthB));
  out.mapA = AffineMap2D::translation({Rational(a.lattice().cell_width() * out.shiftA), Rational(0)});
  out.mapB = AffineMap2D::translation({Rational(b.lattice().cell_width() * out.shiftB), Rational(0)});
  return out;
}

TruncationReport truncate_sharp(const GridSet2D& a, const GridSet2D& b, std::int64_t columns, const Rational& t,
                                const SumOptions& opts) {
  if (columns <= 0) throw Error(ErrorCode::EmptyAfterTruncation, "strip width must be positive");
  TruncationReport r;
  r.columns = columns;
  r.a = clip_columns(a, 0, columns);
  r.b = clip_columns(b, 0, columns);
  if (r.a.empty() || r.b.empty()) throw Error(ErrorCode::EmptyAfterTruncation, "strip [0, a] misses A or B");
  const Rational ma = measure(r.a), mb = measure(r.b);
  r.clippedA = measure(a) - ma;
  r.clippedB = measure(b) - mb;
  r.additiveGap = measure(scaled_sum(r.a, r.b, t, opts)) - t * ma - (1 - t) * mb;
  return r;
}

SliceFit fit_slice_intervals(const GridSet2D& a, const GridSet2D& b, const Rational& t, double delta,
                             std::int64_t cellsA, std::int64_t cellsB, const PipelineConfig& cfg) {
  if (cellsA <= 0 || cellsB <= 0) throw Error(ErrorCode::InvalidArgument, "interval lengths must be positive");
  SliceFit fit;
  const Rational w = a.lattice().cell_width(), h = a.lattice().cell_height();
  fit.omega = Set1D(w);
  fit.sliceThreshold = delta_power(delta, cfg.sliceExponent);
  fit.excessThreshold = delta_power(delta, cfg.excessExponent);
  const Rational nc = t * cellsA + (1 - t) * cellsB;
  fit.c = nc * w;
  const std::int64_t cells = ceil_to_i64(nc);
  auto colsA = column_runs(a), colsB = column_runs(b);

  std::vector<Run> omega;
  std::int64_t admitted = 0;
  for (std::int64_t k = 0; k < cells; ++k) {
    ColumnRecord rec;
    rec.k = k;
    rec.colA = clamp_i64(round_half_down(Rational(k * cellsA) / nc), 0, cellsA - 1);
    rec.colB = clamp_i64(round_half_down(Rational(k * cellsB) / nc), 0, cellsB - 1);
    Set1D sa = column_set(colsA, rec.colA, h), sb = column_set(colsB, rec.colB, h);
    rec.measureA = sa.length();
    rec.measureB = sb.length();
    if (!sa.empty() && !sb.empty()) {
      rec.deficit1d = scaled_sumset_1d(sa, sb, t, cfg.sum.max_t_denominator).length() - t * rec.measureA -
                      (1 - t) * rec.measureB;
      rec.excessA = h * sa.hull().length() - rec.measureA;
      rec.excessB = h * sb.hull().length() - rec.measureB;
      const Rational excessCap = fit.excessThreshold + h;
      rec.admitted = rec.measureA >= fit.sliceThreshold && rec.measureB >= fit.sliceThreshold &&
                     rec.deficit1d <= fit.excessThreshold && rec.excessA <= excessCap && rec.excessB <= excessCap;
    }
    if (rec.admitted) {
      ++admitted;
      omega.push_back({k, k + 1});
      Interval ha = sa.hull(), hb = sb.hull();
      fit.centersPhi[rec.colA] = h * Rational(ha.begin + ha.end, 2);
      fit.centersPsi[rec.colB] = h * Rational(hb.begin + hb.end, 2);
      fit.lengthsA[rec.colA] = h * ha.length();
      fit.lengthsB[rec.colB] = h * hb.length();
      fit.excessA[rec.colA] = rec.excessA;
      fit.excessB[rec.colB] = rec.excessB;
    }
    fit.columns.push_back(std::move(rec));
  }
  if (admitted == 0) throw Error(ErrorCode::OmegaEmpty, "no column pair passes the slice tests");
  fit.omega = Set1D(w, std::move(omega));
  fit.complementMass = w * (cells - admitted);
  return fit;
}

RobustFit robust_affine_fit(const std::vector<Point2>& points, const Rational& inlierTolerance) {
  std::vector<Rational> slopes;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i].x != points[j].x)
        slopes.push_back(Rational((points[j].y - points[i].y) / (points[j].x - points[i].x)));
  if (slopes.empty()) throw Error(ErrorCode::DegenerateInput, "robust fit needs two distinct x values");
  RobustFit fit;
  fit.points = points.size();
  fit.slope = lower_median(std::move(slopes));
  std::vector<Rational> residuals;
  residuals.reserve(points.size());
  for (const Point2& p : points) residuals.push_back(Rational(p.y - fit.slope * p.x));
  fit.intercept = lower_median(residuals);
  std::size_t inliers = 0;
  for (const Rational& r : residuals)
    if (abs(Rational(r - fit.intercept)) <= inlierTolerance) ++inliers;
  fit.inlierFraction = static_cast<double>(inliers) / static_cast<double>(points.size());
  return fit;
}

std::vector<Point2> center_points(const std::map<std::int64_t, Rational>& centers, const Rational& cellWidth) {
  std::vector<Point2> pts;
  pts.reserve(centers.size());
  for (const auto& [i, y] : centers) pts.push_back({Rational(cellWidth * (i + Rational(1, 2))), y});
  return pts;
}

ShearResult shear_normalize(const GridSet2D& a, const GridSet2D& b, const RobustFit& fitA, const RobustFit& fitB,
                            const std::vector<Point2>& pointsA, const std::vector<Point2>& pointsB,
                            const PipelineConfig& cfg) {
  ShearResult out;
  if (abs(Rational(fitA.slope - fitB.slope)) <= cfg.slopeTolerance) {
    out.slope = (fitA.slope + fitB.slope) / 2;
  } else {
    std::vector<Point2> pooled = pointsA;
    pooled.insert(pooled.end(), pointsB.begin(), pointsB.end());
    out.slope = robust_affine_fit(pooled, cfg.inlierTolerance).slope;
    out.pooled = true;
  }
  auto intercept = [&](const std::vector<Point2>& pts) {
    std::vector<Rational> r;
    for (const Point2& p : pts) r.push_back(Rational(p.y - out.slope * p.x));
    return lower_median(std::move(r));
  };
  out.interceptA = intercept(pointsA);
  out.interceptB = intercept(pointsB);

  const Rational w = a.lattice().cell_width(), h = a.lattice().cell_height();
  // Column i moves by round(-slope * i * w / h); what is left of the trend at
  // column centers is slope * w / 2 + intercept.
  const Rational half = out.slope * w / 2;
  out.shiftA = -round_half_up(Rational((out.interceptA + half) / h));
  out.shiftB = -round_half_up(Rational((out.interceptB + half) / h));
  const Rational neg = -out.slope;
  out.a = translate(discrete_shear(a, neg), 0, out.shiftA);
  out.b = translate(discrete_shear(b, neg), 0, out.shiftB);
  AffineMap2D shear = AffineMap2D::shear_y(neg);
  out.mapA = AffineMap2D::translation({Rational(0), Rational(h * out.shiftA)}).after(shear);
  out.mapB = AffineMap2D::translation({Rational(0), Rational(h * out.shiftB)}).after(shear);
  return out;
}

Vec2 centroid(const GridSet2D& s) {
  if (s.empty()) throw Error(ErrorCode::EmptySet, "centroid of an empty set");
  const Rational w = s.lattice().cell_width(), h = s.lattice().cell_height();
  BigInt sx = 0, sy = 0, n = 0;
  // Sums of doubled cell-center indices keep everything integral.
  for (const auto& [j, runs] : s.rows())
    for (const Run& r : runs) {
      BigInt len(std::to_string(r.length()));
      BigInt span(std::to_string(r.begin + r.end));
      sx += len * span;
      sy += len * BigInt(std::to_string(2 * j + 1));
      n += len;
    }
  Rational cx(sx, 2 * n), cy(sy, 2 * n);
  cx.canonicalize();
  cy.canonicalize();
  return {Rational(cx * w), Rational(cy * h)};
}

Rational mass_in_box(const GridSet2D& s, const Vec2& c, const Rational& r) {
  const Rational w = s.lattice().cell_width(), h = s.lattice().cell_height();
  const Rational x0 = c.x - r, x1 = c.x + r, y0 = c.y - r, y1 = c.y + r;
  Rational total = 0;
  for (const auto& [j, runs] : s.rows()) {
    Rational oy = overlap(Rational(h * j), Rational(h * (j + 1)), y0, y1);
    if (oy == 0) continue;
    for (const Run& run : runs) {
      Rational ox = overlap(Rational(w * run.begin), Rational(w * run.end), x0, x1);
      if (ox != 0) total += ox * oy;
    }
  }
  return total;
}

GridSet2D rational_rotate(const GridSet2D& s, const Rational& c, const Rational& sn, int supersample) {
  if (c * c + sn * sn != 1) throw Error(ErrorCode::InvalidArgument, "rotation needs c^2 + s^2 = 1");
  if (s.empty()) return s;
  const LatticeSpec& l = s.lattice();
  const Rational w = l.cell_width(), h = l.cell_height();
  GridSet2D::Box bx = s.bounds();
  Rational xs[2] = {Rational(w * bx.i0), Rational(w * bx.i1)}, ys[2] = {Rational(h * bx.j0), Rational(h * bx.j1)};
  Rational minx, maxx, miny, maxy;
  bool first = true;
  for (const auto& x : xs)
    for (const auto& y : ys) {
      Rational rx = c * x - sn * y, ry = sn * x + c * y;
      if (first || rx < minx) minx = rx;
      if (first || rx > maxx) maxx = rx;
      if (first || ry < miny) miny = ry;
      if (first || ry > maxy) maxy = ry;
      first = false;
    }
  const std::int64_t i0 = floor_to_i64(minx / w), i1 = ceil_to_i64(maxx / w);
  const std::int64_t j0 = floor_to_i64(miny / h), j1 = ceil_to_i64(maxy / h);
  const int ss = std::max(1, supersample);
  GridSet2D::Rows rows;
  for (std::int64_t j = j0; j < j1; ++j)
    for (std::int64_t i = i0; i < i1; ++i) {
      int hits = 0;
      for (int u = 0; u < ss; ++u)
        for (int v = 0; v < ss; ++v) {
          Rational x = w * (i + Rational(2 * u + 1, 2 * ss)), y = h * (j + Rational(2 * v + 1, 2 * ss));
          Rational bxp = c * x + sn * y, byp = c * y - sn * x;  // inverse rotation
          if (s.contains(floor_to_i64(bxp / w), floor_to_i64(byp / h))) ++hits;
        }
      if (2 * hits > ss * ss) rows[j].push_back({i, i + 1});
    }
  return GridSet2D(l, std::move(rows));
}

NormalizedPair normalize_full(const GridSet2D& a, const GridSet2D& b, const Rational& t, const PipelineConfig& cfg) {
  NormalizedPair out;
  PassOutput p1 = run_pass(a, b, t, cfg, "pass1");
  out.passes.push_back(p1.report);
  out.omega.push_back(p1.omega);
  GridSet2D fa = p1.a, fb = p1.b;
  AffineMap2D ma = p1.mapA, mb = p1.mapB;

  if (cfg.secondPass) {
    const AffineMap2D rot = AffineMap2D::rotation90();
    const AffineMap2D back = rot.after(rot).after(rot);
    PassOutput p2 = run_pass(rotate90(fa), rotate90(fb), t, cfg, "pass2");
    out.passes.push_back(p2.report);
    out.omega.push_back(p2.omega);
    fa = rotate90(rotate90(rotate90(p2.a)));
    fb = rotate90(rotate90(rotate90(p2.b)));
    ma = back.after(p2.mapA.after(rot.after(ma)));
    mb = back.after(p2.mapB.after(rot.after(mb)));
  }
  out.a = fa;
  out.b = fb;
  out.composedMapA = ma;
  out.composedMapB = mb;

  out.centroidA = centroid(fa);
  out.centroidB = centroid(fb);
  const double delta = std::max(0.0, out.passes.front().deficit.deltaMult);
  out.massFraction = 1 - delta_power(delta, cfg.massExponent);
  out.fullContainmentRadius = max(full_radius(fa, out.centroidA), full_radius(fb, out.centroidB));
  const Rational step = min(fa.lattice().cell_width(), fa.lattice().cell_height()) / 2;
  const std::int64_t kmax = ceil_to_i64(out.fullContainmentRadius / step);
  auto smallest = [&](const GridSet2D& s, const Vec2& c) {
    const Rational target = out.massFraction * measure(s);
    std::int64_t lo = 0, hi = kmax;
    while (lo < hi) {
      std::int64_t mid = (lo + hi) / 2;
      if (mass_in_box(s, c, Rational(step * mid)) >= target) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  };
  const std::int64_t k = std::max(smallest(fa, out.centroidA), smallest(fb, out.centroidB));
  out.containmentBallRadius = step * k;
  out.insideMassA = mass_in_box(fa, out.centroidA, out.containmentBallRadius);
  out.insideMassB = mass_in_box(fb, out.centroidB, out.containmentBallRadius);

  if (cfg.rationalRotation) {
    const std::pair<Rational, Rational> angles[] = {{Rational(4, 5), Rational(3, 5)},
                                                    {Rational(3, 5), Rational(4, 5)},
                                                    {Rational(12, 13), Rational(5, 13)}};
    for (const auto& [c, s] : angles) {
      RotationProbe probe;
      probe.cosine = c;
      probe.sine = s;
      GridSet2D ra = rational_rotate(fa, c, s, cfg.rotationSupersample);
      GridSet2D rb = rational_rotate(fb, c, s, cfg.rotationSupersample);
      probe.measureErrorA = abs(Rational(measure(ra) - measure(fa)));
      probe.measureErrorB = abs(Rational(measure(rb) - measure(fb)));
      if (!ra.empty() && !rb.empty()) {
        probe.deltaMult = deficit(ra, rb, t, cfg.sum).deltaMult;
        probe.supA = sup_norm(ra);
        probe.supB = sup_norm(rb);
      }
      out.rotations.push_back(probe);
    }
  }
  return out;
}

}  // namespace bmstab
