#include "bmstab/level_profile.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bmstab/error.hpp"
#include "bmstab/sumset.hpp"

namespace bmstab {

namespace {

std::map<std::int64_t, std::int64_t> column_heights(const GridSet2D& s) {
  std::map<std::int64_t, std::int64_t> h;
  for (const auto& [j, runs] : s.rows())
    for (const Run& r : runs)
      for (std::int64_t i = r.begin; i < r.end; ++i) ++h[i];
  return h;
}

Set1D scale_1d(const Set1D& s, std::int64_t k, std::int64_t den) {
  std::vector<Run> runs;
  runs.reserve(s.runs().size());
  for (const Run& r : s.runs()) runs.push_back({r.begin * k, r.end * k});
  return Set1D(Rational(s.scale() / den), std::move(runs));
}

bool subset_1d(const Set1D& x, const Set1D& y) {
  for (const Run& r : x.runs())
    if (y.intersect(r).count() != r.length()) return false;
  return true;
}

}  // namespace

Rational StepProfile::value_at(const Rational& s) const {
  if (values.empty()) return 0;
  if (s < breakpoints.front()) return values.front();
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
  std::size_t k = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  return k < values.size() ? values[k] : Rational(0);
}

Rational StepProfile::integral() const {
  Rational total = 0;
  for (std::size_t k = 0; k < values.size(); ++k) total += values[k] * (breakpoints[k + 1] - breakpoints[k]);
  return total;
}

Rational StepProfile::support_end() const { return breakpoints.empty() ? Rational(0) : breakpoints.back(); }

bool StepProfile::nonincreasing() const {
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[k - 1]) return false;
  return true;
}

StepProfile column_profile(const GridSet2D& s) {
  StepProfile p;
  p.domainScale = s.lattice().cell_width();
  p.breakpoints.push_back(0);
  auto heights = column_heights(s);
  if (heights.empty()) return p;
  std::map<std::int64_t, std::int64_t> by_height;  // height -> number of columns
  for (const auto& [i, h] : heights) ++by_height[h];
  const Rational ch = s.lattice().cell_height();
  std::int64_t remaining = static_cast<std::int64_t>(heights.size());
  for (const auto& [h, n] : by_height) {
    p.values.push_back(Rational(p.domainScale * remaining));
    p.breakpoints.push_back(Rational(ch * h));
    remaining -= n;
  }
  return p;
}

Rational sup_norm(const GridSet2D& s) {
  std::int64_t best = 0;
  for (const auto& [i, h] : column_heights(s)) best = std::max(best, h);
  return Rational(s.lattice().cell_height() * best);
}

Set1D superlevel_set(const GridSet2D& s, const Rational& level) {
  std::vector<Run> runs;
  const Rational ch = s.lattice().cell_height();
  for (const auto& [i, h] : column_heights(s))
    if (ch * h > level) runs.push_back({i, i + 1});
  return Set1D(s.lattice().cell_width(), std::move(runs));
}

SupRatioReport sup_ratio_check(const GridSet2D& a, const GridSet2D& b, const Rational& t,
                               const SumOptions& opts) {
  TParts tp = split_t(t, opts.max_t_denominator);
  GridSet2D s = scaled_sum(a, b, t, opts);
  SupRatioReport rep;
  rep.supA = sup_norm(a);
  rep.supB = sup_norm(b);
  rep.supS = sup_norm(s);
  rep.ratioA = rep.supA / rep.supS;
  rep.ratioB = rep.supB / rep.supS;

  const Rational top = min(rep.supA, rep.supB);
  std::set<Rational> levels;
  for (const auto* prof : {&a, &b}) {
    StepProfile p = column_profile(*prof);
    for (const Rational& x : p.breakpoints)
      if (x < top) levels.insert(x);
  }
  for (const Rational& lam : levels) {
    Set1D sa = superlevel_set(a, lam), sb = superlevel_set(b, lam);
    if (sa.empty() || sb.empty()) continue;
    Set1D lhs = sumset_1d(scale_1d(sa, tp.p, tp.q), scale_1d(sb, tp.q - tp.p, tp.q));
    ++rep.levelsChecked;
    if (!subset_1d(lhs, superlevel_set(s, lam))) {
      rep.inclusionHolds = false;
      if (!rep.failingLevel) rep.failingLevel = lam;
    }
  }
  return rep;
}

VerticalNormalization vertical_normalize(const GridSet2D& a, const GridSet2D& b, const PipelineConfig& cfg) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::DegenerateInput, "vertical_normalize needs nonempty sets");
  const Rational ma = measure(a), mb = measure(b);
  const Rational lo = 1 - cfg.measureBand, hi = 1 + cfg.measureBand;
  if (ma < lo || ma > hi || mb < lo || mb > hi)
    throw Error(ErrorCode::HypothesisNotSatisfied, "measures " + to_string(ma) + ", " + to_string(mb) +
                                                       " outside the band around 1");
  VerticalNormalization out;
  const Rational p = sup_norm(a) * sup_norm(b);
  if (auto r = exact_sqrt(p)) {
    out.r = *r;
    out.exact = true;
  } else {
    out.r = approximate(std::sqrt(to_double(p)), cfg.approximationTolerance);
  }
  out.map = AffineMap2D::diagonal(out.r, Rational(1 / out.r));
  out.a = anisotropic_scale(a, out.r);
  out.b = anisotropic_scale(b, out.r);
  out.supA = sup_norm(out.a);
  out.supB = sup_norm(out.b);
  return out;
}

ProjectionReport projection_bound_report(const GridSet2D& a, const GridSet2D& b, const Rational& bound) {
  ProjectionReport rep;
  rep.projA = project_x(a).length();
  rep.projB = project_x(b).length();
  rep.bound = bound;
  const Rational lo = min(rep.projA, rep.projB), hi = max(rep.projA, rep.projB);
  rep.margin = min(Rational(lo * bound), Rational(bound / hi));
  if (rep.margin < 1)
    throw Error(ErrorCode::BoundViolated, "projections " + to_string(rep.projA) + ", " + to_string(rep.projB) +
                                              " outside [1/M, M] with M = " + to_string(bound));
  return rep;
}

PhiProfile phi_profile(const GridSet2D& a, const GridSet2D& b, const Rational& t, const SumOptions& opts) {
  GridSet2D s = scaled_sum(a, b, t, opts);
  StepProfile pa = column_profile(a), pb = column_profile(b), ps = column_profile(s);
  PhiProfile out;
  out.minSup = min(pa.support_end(), pb.support_end());
  std::set<Rational> cuts{Rational(0)};
  for (const auto* p : {&pa, &pb, &ps})
    for (const Rational& x : p->breakpoints)
      if (x < out.minSup) cuts.insert(x);
  out.phi.domainScale = ps.domainScale;
  out.phi.breakpoints.assign(cuts.begin(), cuts.end());
  for (const Rational& x : out.phi.breakpoints) {
    Rational v = ps.value_at(x) - t * pa.value_at(x) - (1 - t) * pb.value_at(x);
    out.phi.values.push_back(v);
  }
  out.phi.breakpoints.push_back(out.minSup);
  out.integral = out.phi.integral();
  out.minimum = out.phi.values.empty() ? Rational(0) : *std::min_element(out.phi.values.begin(), out.phi.values.end());
  return out;
}

Rational delta_power(double delta, double exponent, double tol) {
  if (!(delta > 0)) return 0;
  return approximate(std::pow(delta, exponent), tol);
}

LevelSelection select_level_intervals(const GridSet2D& a, const GridSet2D& b, const Rational& t, double delta,
                                      const PipelineConfig& cfg) {
  TParts tp = split_t(t, cfg.sum.max_t_denominator);
  PhiProfile phi = phi_profile(a, b, t, cfg.sum);
  LevelSelection sel;
  const Rational cell = a.lattice().cell_height();
  const Rational base = delta_power(delta, cfg.levelExponent);
  // Superlevel sets must keep a sizeable measure, so the window stays below
  // a fixed fraction of the smaller sup even when delta is not small.
  const Rational cap = max(Rational(cfg.levelCap * phi.minSup), cell);
  sel.windowLo = min(max(base, cell), cap);
  sel.windowHi = min(max(Rational(2 * base), sel.windowLo), cap);

  std::vector<Rational> candidates;
  if (sel.windowLo < phi.minSup) candidates.push_back(sel.windowLo);
  for (const Rational& x : phi.phi.breakpoints)
    if (x > sel.windowLo && x <= sel.windowHi && x < phi.minSup) candidates.push_back(x);
  if (candidates.empty())
    throw Error(ErrorCode::WindowEmpty, "level window [" + to_string(sel.windowLo) + ", " +
                                            to_string(sel.windowHi) + "] lies above min sup " +
                                            to_string(phi.minSup));
  // Lexicographic (phi, s) minimum; candidates ascend in s.
  sel.s0 = candidates.front();
  sel.phiAtS0 = phi.phi.value_at(sel.s0);
  for (const Rational& s : candidates) {
    Rational v = phi.phi.value_at(s);
    if (v < sel.phiAtS0) {
      sel.s0 = s;
      sel.phiAtS0 = v;
    }
  }

  Set1D sa = superlevel_set(a, sel.s0), sb = superlevel_set(b, sel.s0);
  if (sa.empty() || sb.empty())
    throw Error(ErrorCode::FreimanInapplicable, "empty superlevel set at s0 = " + to_string(sel.s0));
  sel.freiman = freiman_structure(scale_1d(sa, tp.p, tp.q), scale_1d(sb, tp.q - tp.p, tp.q));
  if (!sel.freiman.applicable)
    throw Error(ErrorCode::FreimanInapplicable,
                "superlevel deficit " + to_string(sel.freiman.delta) + " >= min(" +
                    to_string(sel.freiman.measureA) + ", " + to_string(sel.freiman.measureB) + ")");
  sel.intervalI = sa.hull();
  sel.intervalJ = sb.hull();
  sel.outsideMassA = measure(a) - measure(clip_columns(a, sel.intervalI.begin, sel.intervalI.end));
  sel.outsideMassB = measure(b) - measure(clip_columns(b, sel.intervalJ.begin, sel.intervalJ.end));
  auto col_len = [](const GridSet2D& s, std::int64_t i) { return slice(s, i).length(); };
  sel.endpointsHold = col_len(a, sel.intervalI.begin) >= sel.s0 && col_len(a, sel.intervalI.end - 1) >= sel.s0 &&
                      col_len(b, sel.intervalJ.begin) >= sel.s0 && col_len(b, sel.intervalJ.end - 1) >= sel.s0;
  return sel;
}

}  // namespace bmstab
