#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

#include "bmstab/error.hpp"
#include "bmstab/harness.hpp"
#include "bmstab/recovery.hpp"

namespace bmstab {

int default_threads() {
  if (const char* env = std::getenv("BMSTAB_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<int>(n);
  }
  return 1;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  return pearson(ranks(x), ranks(y));
}

std::optional<double> least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

SweepRow run_row(const GeneratorSpec& spec, const Rational& t, const SweepOptions& opts) {
  SweepRow row;
  row.kind = to_string(spec.kind);
  row.resolution = spec.resolution;
  row.biteFraction = spec.biteFraction;
  row.seed = spec.seed;
  row.t = t;
  std::string stage = "generate";
  try {
    Clock::time_point t0 = Clock::now();
    GeneratedPair g = generate(spec);
    row.secondsGenerate = seconds_since(t0);
    row.rasterDefect = to_double(g.rasterDefect);

    stage = "deficit";
    t0 = Clock::now();
    DeficitReport d = deficit(g.a, g.b, t, opts.pipeline.sum);
    row.secondsDeficit = seconds_since(t0);
    row.deltaMult = d.deltaMult;
    row.deltaAdd = d.deltaAdd;
    row.ratioAB = d.ratioAB;

    stage = "recover";
    t0 = Clock::now();
    NormalizedPair n = normalize_full(g.a, g.b, t, opts.pipeline);
    row.detExact = abs(n.composedMapA.det()) == 1 && abs(n.composedMapB.det()) == 1;
    row.measureExact = measure(n.a) == d.measureA && measure(n.b) == d.measureB;
    stage = "build_common_body";
    RecoveryReport r = build_common_body(n, d.deltaMult);
    row.secondsRecover = seconds_since(t0);
    row.epsilonA = to_double(r.epsilonA);
    row.epsilonB = to_double(r.epsilonB);
    row.containsA = r.containsA;
    row.containsB = r.containsB;
    row.rho = to_double(r.rho);
  } catch (const StageError& e) {
    row.stageFailure = e.stage() + ":" + to_string(e.code());
  } catch (const Error& e) {
    row.stageFailure = stage + ":" + to_string(e.code());
  } catch (const std::exception&) {
    row.stageFailure = stage + ":Internal";
  }
  if (row.stageFailure) {
    row.epsilonA.reset();
    row.epsilonB.reset();
    row.containsA.reset();
    row.containsB.reset();
    row.rho.reset();
  }
  return row;
}

SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  s.rows = rows.size();
  std::vector<double> ds, es, lds, les;
  double c = 0;
  bool haveC = false;
  for (const SweepRow& r : rows) {
    if (!r.success()) {
      ++s.failures;
      continue;
    }
    ++s.successes;
    const double eps = std::max(*r.epsilonA, *r.epsilonB);
    ds.push_back(r.deltaMult);
    es.push_back(eps);
    if (r.deltaMult > 0 && eps > 0) {
      lds.push_back(std::log(r.deltaMult));
      les.push_back(std::log(eps));
    }
    const double dev = std::fabs(r.ratioAB - 1);
    if (r.deltaMult > 0) {
      c = std::max(c, dev / std::sqrt(r.deltaMult));
      haveC = true;
    } else if (dev > 0) {
      c = std::numeric_limits<double>::infinity();
      haveC = true;
    }
  }
  s.allFailed = s.rows > 0 && s.successes == 0;
  s.spearman = spearman(ds, es);
  s.gammaHat = least_squares_slope(lds, les);
  if (haveC) s.ratioConstant = c;
  return s;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timings) {
  out << "# bmstab-sweep v1\n";
  out << "kind,resolution,biteFraction,seed,t,deltaMult,deltaAdd,ratioAB,epsilonA,epsilonB,containsA,containsB,"
         "rho,rasterDefect,detExact,measureExact,stageFailure";
  if (timings) out << ",secondsGenerate,secondsDeficit,secondsRecover";
  out << '\n';
  auto opt_d = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  auto opt_b = [](const std::optional<bool>& v) { return v ? std::string(*v ? "1" : "0") : std::string(); };
  for (const SweepRow& r : rows) {
    out << r.kind << ',' << r.resolution << ',' << to_string(r.biteFraction, true) << ',' << r.seed << ','
        << to_string(r.t, true) << ',' << fmt(r.deltaMult) << ',' << fmt(r.deltaAdd) << ',' << fmt(r.ratioAB) << ','
        << opt_d(r.epsilonA) << ',' << opt_d(r.epsilonB) << ',' << opt_b(r.containsA) << ',' << opt_b(r.containsB)
        << ',' << opt_d(r.rho) << ',' << fmt(r.rasterDefect) << ',' << opt_b(r.detExact) << ','
        << opt_b(r.measureExact) << ',' << r.stageFailure.value_or("");
    if (timings) out << ',' << fmt(r.secondsGenerate) << ',' << fmt(r.secondsDeficit) << ',' << fmt(r.secondsRecover);
    out << '\n';
  }
}

SweepResult run_sweep(const std::vector<GeneratorSpec>& specs, const std::vector<Rational>& ts,
                      const SweepOptions& opts) {
  struct Task {
    const GeneratorSpec* spec;
    const Rational* t;
  };
  std::vector<Task> tasks;
  for (const GeneratorSpec& s : specs)
    for (const Rational& t : ts) tasks.push_back({&s, &t});

  SweepResult res;
  res.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) res.rows[i] = run_row(*tasks[i].spec, *tasks[i].t, opts);
  };
  const int threads = std::max(1, std::min<int>(opts.threads > 0 ? opts.threads : default_threads(),
                                                static_cast<int>(std::max<std::size_t>(1, tasks.size()))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  res.summary = summarize(res.rows);
  return res;
}

SweepResult run_sweep(const std::vector<GeneratorSpec>& specs, const std::vector<Rational>& ts,
                      const std::string& outPath, const SweepOptions& opts) {
  SweepResult res = run_sweep(specs, ts, opts);
  std::ofstream out(outPath);
  if (out) write_sweep_csv(out, res.rows, opts.timings);
  if (!out) ++res.summary.ioErrors;
  return res;
}

}  // namespace bmstab
