#include "bmstab/report_json.hpp"

#include "bmstab/error.hpp"

namespace bmstab {

using nlohmann::json;

namespace {

json interval_json(const Interval& i) { return json::array({i.begin, i.end}); }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json rational_map(const std::map<std::int64_t, Rational>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = rational_json(v);
  return out;
}

}  // namespace

json rational_json(const Rational& r) { return to_string(r, true); }

json vec_json(const Vec2& v) { return json::array({rational_json(v.x), rational_json(v.y)}); }

json polygon_json(const ConvexPolygon& p) {
  json out = json::array();
  for (const Vec2& v : p.vertices) out.push_back(vec_json(v));
  return out;
}

json map_json(const AffineMap2D& m) {
  const auto& l = m.linear();
  return {{"linear", json::array({json::array({rational_json(l[0][0]), rational_json(l[0][1])}),
                                  json::array({rational_json(l[1][0]), rational_json(l[1][1])})})},
          {"shift", vec_json(m.shift())},
          {"det", rational_json(m.det())}};
}

json lattice_json(const LatticeSpec& l) {
  return {{"hx", rational_json(l.hx)}, {"hy", rational_json(l.hy)}, {"q", l.q}};
}

json deficit_json(const DeficitReport& d) {
  json out = {{"measureA", rational_json(d.measureA)}, {"measureB", rational_json(d.measureB)},
              {"measureS", rational_json(d.measureS)}, {"measureSum", rational_json(d.measureSum)},
              {"t", rational_json(d.t)},               {"deltaAdd", d.deltaAdd},
              {"deltaMult", d.deltaMult},            {"ratioAB", d.ratioAB}};
  out["deltaAddExact"] = d.deltaAddExact ? rational_json(*d.deltaAddExact) : json(nullptr);
  out["deltaMultExact"] = d.deltaMultExact ? rational_json(*d.deltaMultExact) : json(nullptr);
  return out;
}

json freiman_json(const FreimanReport& f) {
  return {{"measureA", rational_json(f.measureA)}, {"measureB", rational_json(f.measureB)},
          {"sumMeasure", rational_json(f.sumMeasure)}, {"delta", rational_json(f.delta)},
          {"applicable", f.applicable},               {"hullA", interval_json(f.hullA)},
          {"hullB", interval_json(f.hullB)},           {"slackA", rational_json(f.slackA)},
          {"slackB", rational_json(f.slackB)}};
}

json profile_json(const StepProfile& p) {
  json bps = json::array(), vals = json::array();
  for (const Rational& b : p.breakpoints) bps.push_back(rational_json(b));
  for (const Rational& v : p.values) vals.push_back(rational_json(v));
  return {{"breakpoints", bps}, {"values", vals}, {"integral", rational_json(p.integral())}};
}

json sup_ratio_json(const SupRatioReport& r) {
  return {{"supA", rational_json(r.supA)},
          {"supB", rational_json(r.supB)},
          {"supS", rational_json(r.supS)},
          {"ratioA", rational_json(r.ratioA)},
          {"ratioB", rational_json(r.ratioB)},
          {"levelsChecked", r.levelsChecked},
          {"inclusionHolds", r.inclusionHolds},
          {"failingLevel", r.failingLevel ? rational_json(*r.failingLevel) : json(nullptr)}};
}

json pass_json(const PassReport& p) {
  json out;
  out["label"] = p.label;
  out["deficit"] = deficit_json(p.deficit);
  out["vertical"] = {{"r", rational_json(p.vertical.r)},
                     {"exact", p.vertical.exact},
                     {"supA", rational_json(p.vertical.supA)},
                     {"supB", rational_json(p.vertical.supB)},
                     {"map", map_json(p.vertical.map)}};
  out["projection"] = {{"projA", rational_json(p.projection.projA)},
                       {"projB", rational_json(p.projection.projB)},
                       {"bound", rational_json(p.projection.bound)},
                       {"margin", rational_json(p.projection.margin)}};
  const LevelSelection& s = p.selection;
  out["levelSelection"] = {{"s0", rational_json(s.s0)},
                           {"window", json::array({rational_json(s.windowLo), rational_json(s.windowHi)})},
                           {"phiAtS0", rational_json(s.phiAtS0)},
                           {"intervalI", interval_json(s.intervalI)},
                           {"intervalJ", interval_json(s.intervalJ)},
                           {"outsideMassA", rational_json(s.outsideMassA)},
                           {"outsideMassB", rational_json(s.outsideMassB)},
                           {"endpointsHold", s.endpointsHold},
                           {"freiman", freiman_json(s.freiman)}};
  out["alignment"] = {{"shiftA", p.aligned.shiftA},
                      {"shiftB", p.aligned.shiftB},
                      {"lengthA", rational_json(p.aligned.lengthA)},
                      {"lengthB", rational_json(p.aligned.lengthB)},
                      {"gap", rational_json(p.aligned.gap)}};
  out["truncation"] = {{"columns", p.truncation.columns},
                       {"additiveGap", rational_json(p.truncation.additiveGap)},
                       {"clippedA", rational_json(p.truncation.clippedA)},
                       {"clippedB", rational_json(p.truncation.clippedB)}};
  const SliceFit& f = p.fit;
  json omega = json::array();
  for (const Run& r : f.omega.runs()) omega.push_back(interval_json(r));
  out["sliceFit"] = {{"omega", omega},
                     {"c", rational_json(f.c)},
                     {"complementMass", rational_json(f.complementMass)},
                     {"sliceThreshold", rational_json(f.sliceThreshold)},
                     {"excessThreshold", rational_json(f.excessThreshold)},
                     {"centersPhi", rational_map(f.centersPhi)},
                     {"centersPsi", rational_map(f.centersPsi)},
                     {"excessA", rational_map(f.excessA)},
                     {"excessB", rational_map(f.excessB)}};
  auto fit = [](const RobustFit& r) {
    return json{{"slope", rational_json(r.slope)},
                {"intercept", rational_json(r.intercept)},
                {"inlierFraction", r.inlierFraction},
                {"points", r.points}};
  };
  out["fitA"] = fit(p.fitA);
  out["fitB"] = fit(p.fitB);
  out["shear"] = {{"slope", rational_json(p.shear.slope)},
                  {"interceptA", rational_json(p.shear.interceptA)},
                  {"interceptB", rational_json(p.shear.interceptB)},
                  {"shiftA", p.shear.shiftA},
                  {"shiftB", p.shear.shiftB},
                  {"pooled", p.shear.pooled}};
  return out;
}

json normalized_json(const NormalizedPair& n) {
  json out;
  out["lattice"] = lattice_json(n.a.lattice());
  out["composedMapA"] = map_json(n.composedMapA);
  out["composedMapB"] = map_json(n.composedMapB);
  out["centroidA"] = vec_json(n.centroidA);
  out["centroidB"] = vec_json(n.centroidB);
  out["containmentBallRadius"] = rational_json(n.containmentBallRadius);
  out["fullContainmentRadius"] = rational_json(n.fullContainmentRadius);
  out["massFraction"] = rational_json(n.massFraction);
  out["insideMassA"] = rational_json(n.insideMassA);
  out["insideMassB"] = rational_json(n.insideMassB);
  out["passes"] = json::array();
  for (const PassReport& p : n.passes) out["passes"].push_back(pass_json(p));
  out["omega"] = json::array();
  for (const OmegaDiagnostic& o : n.omega)
    out["omega"].push_back({{"samples", o.samples},
                            {"bad", o.bad},
                            {"productMeasure", rational_json(o.productMeasure)},
                            {"badMeasure", o.badMeasure}});
  out["rotations"] = json::array();
  for (const RotationProbe& r : n.rotations)
    out["rotations"].push_back({{"cosine", rational_json(r.cosine)},
                                {"sine", rational_json(r.sine)},
                                {"measureErrorA", rational_json(r.measureErrorA)},
                                {"measureErrorB", rational_json(r.measureErrorB)},
                                {"deltaMult", r.deltaMult}});
  return out;
}

json recovery_json(const RecoveryReport& r) {
  json out;
  out["deficit"] = deficit_json(r.deficit);
  out["normalized"] = normalized_json(r.normalized);
  out["C"] = polygon_json(r.C);
  out["K"] = polygon_json(r.K);
  out["rho"] = rational_json(r.rho);
  out["shiftU"] = vec_json(r.shiftU);
  out["shiftV"] = vec_json(r.shiftV);
  out["centroidOffset"] = vec_json(r.centroidOffset);
  out["areaK"] = rational_json(r.areaK);
  out["insideA"] = rational_json(r.insideA);
  out["insideB"] = rational_json(r.insideB);
  out["epsilonA"] = rational_json(r.epsilonA);
  out["epsilonB"] = rational_json(r.epsilonB);
  out["epsilonAApprox"] = to_double(r.epsilonA);
  out["epsilonBApprox"] = to_double(r.epsilonB);
  out["containsA"] = r.containsA;
  out["containsB"] = r.containsB;
  out["defectA"] = rational_json(r.defectA);
  out["defectB"] = rational_json(r.defectB);
  out["whitening"] = r.whitening ? map_json(*r.whitening) : json(nullptr);
  out["delta"] = r.delta;
  return out;
}

json sweep_row_json(const SweepRow& r) {
  return {{"kind", r.kind},
          {"resolution", r.resolution},
          {"biteFraction", rational_json(r.biteFraction)},
          {"seed", r.seed},
          {"t", rational_json(r.t)},
          {"deltaMult", r.deltaMult},
          {"deltaAdd", r.deltaAdd},
          {"ratioAB", r.ratioAB},
          {"epsilonA", opt(r.epsilonA)},
          {"epsilonB", opt(r.epsilonB)},
          {"containsA", opt(r.containsA)},
          {"containsB", opt(r.containsB)},
          {"rho", opt(r.rho)},
          {"rasterDefect", r.rasterDefect},
          {"detExact", opt(r.detExact)},
          {"measureExact", opt(r.measureExact)},
          {"stageFailure", opt(r.stageFailure)}};
}

json sweep_summary_json(const SweepSummary& s) {
  return {{"rows", s.rows},
          {"successes", s.successes},
          {"failures", s.failures},
          {"allFailed", s.allFailed},
          {"gammaHat", opt(s.gammaHat)},
          {"spearman", opt(s.spearman)},
          {"ratioConstant", opt(s.ratioConstant)},
          {"ioErrors", s.ioErrors}};
}

json verify_json(const VerifyReport& r) {
  json checks = json::array();
  for (const VerifyCheck& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"checked", c.checked},
                      {"detail", c.detail},
                      {"counterexample", opt(c.counterexample)},
                      {"seconds", c.seconds}});
  return {{"passed", r.passed()}, {"checks", checks}};
}

json stage_error_json(const std::string& stage, ErrorCode code, const std::string& message) {
  return {{"stage", stage}, {"code", to_string(code)}, {"message", message}};
}

}  // namespace bmstab
