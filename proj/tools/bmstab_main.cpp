#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bmstab/error.hpp"
#include "bmstab/grid_io.hpp"
#include "bmstab/harness.hpp"
#include "bmstab/interval1d.hpp"
#include "bmstab/recovery.hpp"
#include "bmstab/report_json.hpp"

using namespace bmstab;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  bool json = false;
};

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

void emit(const Globals& g, const json& j, const std::string& plain) {
  if (g.json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << plain;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

int cmd_gen(const Globals& g, const std::string& kind, std::int64_t res, const std::string& bite,
            const std::string& outA, const std::string& outB) {
  GeneratorSpec spec{parse_generator_kind(kind), res, parse_rational(bite), g.seed};
  GeneratedPair p = generate(spec);
  save_bmgrid(outA, p.a);
  if (!outB.empty()) save_bmgrid(outB, p.b);
  json j = {{"kind", kind},
            {"seed", g.seed},
            {"cellsA", p.a.cell_count()},
            {"cellsB", p.b.cell_count()},
            {"rasterDefect", rational_json(p.rasterDefect)},
            {"biteMassA", rational_json(p.biteMassA)},
            {"biteMassB", rational_json(p.biteMassB)}};
  emit(g, j, "A: " + std::to_string(p.a.cell_count()) + " cells, B: " + std::to_string(p.b.cell_count()) +
                 " cells, raster defect " + to_string(p.rasterDefect) + "\n");
  return 0;
}

int cmd_sum(const Globals& g, const std::string& a, const std::string& b, const std::string& t,
            const std::string& engine, const std::string& out) {
  GridSet2D ga = load_bmgrid(a), gb = load_bmgrid(b);
  SumOptions opts;
  opts.engine = parse_engine(engine);
  GridSet2D s = t.empty() ? minkowski_sum(ga, gb, opts.engine) : scaled_sum(ga, gb, parse_rational(t), opts);
  if (!out.empty()) save_bmgrid(out, s);
  else if (!g.json) write_bmgrid(std::cout, s);
  if (g.json) std::cout << json{{"cells", s.cell_count()}, {"measure", rational_json(measure(s))}}.dump(2) << '\n';
  return 0;
}

int cmd_deficit(const Globals& g, const std::string& a, const std::string& b, const std::string& t,
                const std::string& engine) {
  SumOptions opts;
  opts.engine = parse_engine(engine);
  GridSet2D ga = load_bmgrid(a), gb = load_bmgrid(b);
  DeficitReport d = deficit(ga, gb, parse_rational(t), opts);
  BmCertificate c = bm_certificate(ga, gb, parse_rational(t), opts);
  json j = deficit_json(d);
  j["bmExact"] = c.holds;
  emit(g, j,
       "|A| " + to_string(d.measureA) + "  |B| " + to_string(d.measureB) + "  |tA+(1-t)B| " + to_string(d.measureS) +
           "\ndeltaAdd " + fmt(d.deltaAdd) + "  deltaMult " + fmt(d.deltaMult) + "  exact BM " +
           (c.holds ? "holds" : "FAILS") + "\n");
  return c.holds ? 0 : 1;
}

int cmd_profile(const Globals& g, const std::string& a, const std::string& b, const std::string& t) {
  GridSet2D ga = load_bmgrid(a);
  json j = {{"profileA", profile_json(column_profile(ga))}, {"supA", rational_json(sup_norm(ga))}};
  std::string plain = "sup |A_x| = " + to_string(sup_norm(ga)) + "\n";
  if (!b.empty()) {
    GridSet2D gb = load_bmgrid(b);
    j["profileB"] = profile_json(column_profile(gb));
    if (!t.empty()) {
      SupRatioReport r = sup_ratio_check(ga, gb, parse_rational(t));
      j["supRatio"] = sup_ratio_json(r);
      PhiProfile phi = phi_profile(ga, gb, parse_rational(t));
      j["phi"] = profile_json(phi.phi);
      j["phiMinimum"] = rational_json(phi.minimum);
      plain += "sup ratios " + to_string(r.ratioA) + ", " + to_string(r.ratioB) + "; superlevel inclusion " +
               (r.inclusionHolds ? "holds" : "fails") + " on " + std::to_string(r.levelsChecked) + " levels\n";
    }
  }
  emit(g, j, plain);
  return 0;
}

int cmd_recover(const Globals& g, const std::string& a, const std::string& b, const std::string& t,
                const std::string& reportPath) {
  GridSet2D ga = load_bmgrid(a), gb = load_bmgrid(b);
  json j;
  int code = 0;
  std::string plain;
  try {
    RecoveryReport r = recover(ga, gb, parse_rational(t));
    j = recovery_json(r);
    plain = "deltaMult " + fmt(r.deficit.deltaMult) + "\nepsilonA " + fmt(to_double(r.epsilonA)) + "  epsilonB " +
            fmt(to_double(r.epsilonB)) + "\ncontainsA " + (r.containsA ? "yes" : "no") + "  containsB " +
            (r.containsB ? "yes" : "no") + "\nK has " + std::to_string(r.K.vertices.size()) + " vertices, area " +
            fmt(to_double(r.areaK)) + "\n";
  } catch (const StageError& e) {
    j = {{"stageFailure", stage_error_json(e.stage(), e.code(), e.what())}};
    plain = std::string("stage failure: ") + e.what() + " (" + e.stage() + ")\n";
    code = 2;
  }
  if (!reportPath.empty()) {
    std::ofstream out(reportPath);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + reportPath);
  }
  emit(g, j, plain);
  return code;
}

int cmd_sweep(const Globals& g, const std::string& kinds, const std::string& fractions, int seeds,
              std::int64_t res, const std::string& ts, const std::string& out, bool timings) {
  std::vector<GeneratorSpec> specs;
  std::stringstream ks(kinds);
  std::vector<Rational> fs = parse_list(fractions);
  for (std::string k; std::getline(ks, k, ',');)
    for (const Rational& f : fs)
      for (int s = 0; s < seeds; ++s)
        specs.push_back({parse_generator_kind(k), res, f, g.seed + static_cast<std::uint64_t>(s)});
  SweepOptions opts;
  opts.threads = g.threads;
  opts.timings = timings;
  SweepResult r = out.empty() ? run_sweep(specs, parse_list(ts), opts) : run_sweep(specs, parse_list(ts), out, opts);
  if (out.empty() && !g.json) write_sweep_csv(std::cout, r.rows, timings);
  const SweepSummary& s = r.summary;
  auto o = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("n/a"); };
  std::string plain = "rows " + std::to_string(s.rows) + "  successes " + std::to_string(s.successes) +
                      "  failures " + std::to_string(s.failures) + (s.allFailed ? "  (all rows failed)" : "") +
                      "\ngammaHat " + o(s.gammaHat) + "  spearman " + o(s.spearman) + "  ratio constant " +
                      o(s.ratioConstant) + "\n";
  emit(g, sweep_summary_json(s), out.empty() && !g.json ? "" : plain);
  if (out.empty() && !g.json) std::cerr << plain;
  return s.ioErrors == 0 ? 0 : 1;
}

int cmd_verify(const Globals& g, const std::string& what, const std::string& level, int maxCells) {
  const int threads = g.threads > 0 ? g.threads : default_threads();
  if (what == "freiman" || what == "localization" || what == "bm1d") {
    mask1d::ExhaustiveResult r;
    if (what == "freiman") {
      r = mask1d::freiman(maxCells, threads);
    } else if (what == "bm1d") {
      r = mask1d::bm_1d(maxCells, threads);
    } else {
      mask1d::DeficitTable table(maxCells, threads);
      r = mask1d::localization_windows(table);
      mask1d::ExhaustiveResult tail = mask1d::localization_right_tail(table);
      r.checked += tail.checked;
      r.counterexamples += tail.counterexamples;
      if (!r.first) r.first = tail.first;
    }
    json j = {{"check", what},   {"universe", r.universe}, {"pairs", r.pairs}, {"checked", r.checked},
              {"counterexamples", r.counterexamples}, {"strictCounterexamples", r.strictCounterexamples}};
    std::string plain;
    if (r.counterexamples == 0) {
      plain = "certificate: " + std::to_string(r.checked) + " pairs checked over a " + std::to_string(r.universe) +
              "-cell universe, no counterexample\n";
    } else {
      std::ostringstream s;
      s << "counterexample: A=0x" << std::hex << r.first->first << " B=0x" << r.first->second << std::dec << " ("
        << r.counterexamples << " total)\n";
      plain = s.str();
      j["first"] = {r.first->first, r.first->second};
    }
    emit(g, j, plain);
    return r.counterexamples == 0 ? 0 : 1;
  }
  VerifyOptions opts;
  opts.level = level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  opts.threads = threads;
  opts.seed = g.seed;
  VerifyReport rep = verify_all(opts);
  std::string plain;
  for (const VerifyCheck& c : rep.checks) {
    plain += (c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + " [" + fmt(c.seconds) + " s]\n";
    if (c.counterexample) plain += *c.counterexample;
  }
  emit(g, verify_json(rep), plain);
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Minkowski sums, Brunn-Minkowski deficits and stability recovery on lattice-cell sets"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: BMSTAB_THREADS or 1)");
  app.add_flag("--json", g.json, "Emit JSON on stdout");

  std::string a, b, t, out, outB, engine = "bitmask", kind = "bitePair", bite = "0", report;
  std::int64_t resolution = 32;

  CLI::App* gen = app.add_subcommand("gen", "Generate a pair of sets");
  gen->add_option("--kind", kind, "rectangle|ellipse|disk|randomPolygon|bitePair|homotheticPair|blobPair")
      ->capture_default_str();
  gen->add_option("--resolution", resolution, "Cells per unit length")->capture_default_str();
  gen->add_option("--bite", bite, "Bite fraction in [0, 1/4]")->capture_default_str();
  gen->add_option("--out", out, "Output grid for A")->required();
  gen->add_option("--out-b", outB, "Output grid for B");

  CLI::App* sum = app.add_subcommand("sum", "Minkowski sum A+B, or tA+(1-t)B with --t");
  sum->add_option("--a", a)->required();
  sum->add_option("--b", b)->required();
  sum->add_option("--t", t, "Scale parameter p/q");
  sum->add_option("--engine", engine, "naive|bitmask|conv")->capture_default_str();
  sum->add_option("--out", out, "Output grid (stdout when omitted)");

  CLI::App* def = app.add_subcommand("deficit", "Additive and multiplicative deficits");
  def->add_option("--a", a)->required();
  def->add_option("--b", b)->required();
  def->add_option("--t", t)->required();
  def->add_option("--engine", engine)->capture_default_str();

  CLI::App* prof = app.add_subcommand("profile", "Column profiles and superlevel checks");
  prof->add_option("--a", a)->required();
  prof->add_option("--b", b);
  prof->add_option("--t", t);

  CLI::App* rec = app.add_subcommand("recover", "Full recovery pipeline with a stage-by-stage report");
  rec->add_option("--a", a)->required();
  rec->add_option("--b", b)->required();
  rec->add_option("--t", t)->required();
  rec->add_option("--report", report, "Write the JSON report here");

  std::string kinds = "bitePair", fractions = "1/100,2/100,5/100", ts = "1/2";
  int seeds = 30;
  bool timings = false;
  CLI::App* sw = app.add_subcommand("sweep", "Deficit/recovery sweep over generated pairs");
  sw->add_option("--kinds", kinds, "Comma separated generator kinds")->capture_default_str();
  sw->add_option("--fractions", fractions, "Comma separated bite fractions")->capture_default_str();
  sw->add_option("--seeds", seeds, "Seeds per (kind, fraction)")->capture_default_str();
  sw->add_option("--resolution", resolution)->capture_default_str();
  sw->add_option("--t", ts, "Comma separated t values")->capture_default_str();
  sw->add_option("--out", out, "CSV output path (stdout when omitted)");
  sw->add_flag("--timings", timings, "Append stage timing columns");

  std::string what = "all", level = "quick";
  int maxCells = 12;
  CLI::App* ver = app.add_subcommand("verify", "Invariant suites");
  ver->add_option("what", what, "all|freiman|localization|bm1d")->capture_default_str();
  ver->add_option("--level", level, "quick|full")->capture_default_str();
  ver->add_option("--max-cells", maxCells, "Universe size for 1D suites")->check(CLI::Range(1, 12))->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(g, kind, resolution, bite, out, outB);
    if (*sum) return cmd_sum(g, a, b, t, engine, out);
    if (*def) return cmd_deficit(g, a, b, t, engine);
    if (*prof) return cmd_profile(g, a, b, t);
    if (*rec) return cmd_recover(g, a, b, t, report);
    if (*sw) return cmd_sweep(g, kinds, fractions, seeds, resolution, ts, out, timings);
    if (*ver) return cmd_verify(g, what, level, maxCells);
  } catch (const Error& e) {
    if (g.json)
      std::cout << json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}}.dump(2) << '\n';
    else
      std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
