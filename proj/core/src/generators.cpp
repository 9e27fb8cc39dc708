#include "bmstab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "bmstab/convex_geometry.hpp"
#include "bmstab/error.hpp"

namespace bmstab {

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_below(0)");
  // Reject the incomplete top bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Rectangle: return "rectangle";
    case GeneratorKind::Ellipse: return "ellipse";
    case GeneratorKind::Disk: return "disk";
    case GeneratorKind::RandomPolygon: return "randomPolygon";
    case GeneratorKind::BitePair: return "bitePair";
    case GeneratorKind::HomotheticPair: return "homotheticPair";
    case GeneratorKind::BlobPair: return "blobPair";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  for (GeneratorKind k : {GeneratorKind::Rectangle, GeneratorKind::Ellipse, GeneratorKind::Disk,
                          GeneratorKind::RandomPolygon, GeneratorKind::BitePair, GeneratorKind::HomotheticPair,
                          GeneratorKind::BlobPair})
    if (name == to_string(k)) return k;
  throw Error(ErrorCode::InvalidSpec, "unknown generator kind '" + name + "'");
}

GridSet2D raster_quadratic(const LatticeSpec& lattice, std::int64_t a, std::int64_t b, std::int64_t c,
                           std::int64_t r) {
  const std::int64_t det = a * c - b * b;
  if (a <= 0 || det <= 0 || r < 0) throw Error(ErrorCode::InvalidSpec, "quadratic form is not positive definite");
  const auto umax = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r) * c / det)) + 2;
  GridSet2D::Rows rows;
  for (std::int64_t j = -umax; j <= umax; ++j) {
    const std::int64_t v = 2 * j + 1;
    std::vector<Run> runs;
    for (std::int64_t i = -umax; i <= umax; ++i) {
      const std::int64_t u = 2 * i + 1;
      if (a * u * u + 2 * b * u * v + c * v * v <= r) {
        if (!runs.empty() && runs.back().end == i)
          runs.back().end = i + 1;
        else
          runs.push_back({i, i + 1});
      }
    }
    if (!runs.empty()) rows.emplace(j, std::move(runs));
  }
  return GridSet2D(lattice, std::move(rows));
}

namespace {

using Cell = std::pair<std::int64_t, std::int64_t>;

// r with area pi r / sqrt(det) / (4 q^2) = area.
std::int64_t radius_for_area(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t q, double area) {
  const double det = static_cast<double>(a * c - b * b);
  return static_cast<std::int64_t>(std::floor(area * 4.0 * static_cast<double>(q * q) * std::sqrt(det) / std::numbers::pi));
}

struct Form {
  std::int64_t a, b, c;
};

Form random_form(Rng& rng) {
  return {uniform_int(rng, 1000, 2000), uniform_int(rng, -300, 300), uniform_int(rng, 1000, 2000)};
}

GridSet2D raster_polygon(const LatticeSpec& lattice, const ConvexPolygon& p) {
  Rational x0 = p.vertices.front().x, x1 = x0, y0 = p.vertices.front().y, y1 = y0;
  for (const Vec2& v : p.vertices) {
    x0 = min(x0, v.x);
    x1 = max(x1, v.x);
    y0 = min(y0, v.y);
    y1 = max(y1, v.y);
  }
  const Rational w = lattice.cell_width(), h = lattice.cell_height();
  std::vector<Cell> cells;
  for (std::int64_t j = floor_to_i64(Rational(y0 / h)) - 1; j <= ceil_to_i64(Rational(y1 / h)); ++j)
    for (std::int64_t i = floor_to_i64(Rational(x0 / w)) - 1; i <= ceil_to_i64(Rational(x1 / w)); ++i) {
      Vec2 center{Rational(w * (2 * i + 1) / 2), Rational(h * (2 * j + 1) / 2)};
      if (contains(p, center)) cells.emplace_back(i, j);
    }
  return GridSet2D::from_cells(lattice, cells);
}

ConvexPolygon random_polygon(Rng& rng) {
  std::vector<Vec2> pts;
  for (int k = 0; k < 16; ++k)
    pts.push_back({Rational(uniform_int(rng, -500, 500)), Rational(uniform_int(rng, -500, 500))});
  ConvexPolygon p = convex_hull(pts);
  // Unit area: scale by an approximation of 1/sqrt(area).
  Rational s = approximate(1.0 / std::sqrt(to_double(polygon_area(p))), 1e-9);
  for (Vec2& v : p.vertices) v = s * v;
  return p;
}

GridSet2D translated_copy(const GridSet2D& s, Rng& rng, std::int64_t q) {
  return translate(s, uniform_int(rng, -q, q), uniform_int(rng, -q, q));
}

}  // namespace

GridSet2D bite(const GridSet2D& s, std::int64_t cells, int clusters, Rng& rng) {
  if (cells <= 0) return s;
  std::set<Cell> live;
  for (const Cell& c : s.cells()) live.insert(c);
  if (cells >= static_cast<std::int64_t>(live.size())) throw Error(ErrorCode::InvalidSpec, "bite removes the whole set");
  auto is_boundary = [&](const Cell& c) {
    return !live.count({c.first + 1, c.second}) || !live.count({c.first - 1, c.second}) ||
           !live.count({c.first, c.second + 1}) || !live.count({c.first, c.second - 1});
  };
  clusters = std::max(1, clusters);
  std::int64_t remaining = cells;
  for (int k = 0; k < clusters && remaining > 0; ++k) {
    std::int64_t size = k + 1 == clusters ? remaining : cells / clusters;
    if (size <= 0) continue;
    std::vector<Cell> boundary;
    for (const Cell& c : live)
      if (is_boundary(c)) boundary.push_back(c);
    Cell seed = boundary[uniform_below(rng, boundary.size())];
    std::set<Cell> frontier{seed};
    for (std::int64_t n = 0; n < size && !frontier.empty(); ++n) {
      // Prefer frontier cells on the boundary so bites stay shallow.
      std::vector<Cell> shallow, all(frontier.begin(), frontier.end());
      for (const Cell& c : all)
        if (is_boundary(c)) shallow.push_back(c);
      const std::vector<Cell>& pool = shallow.empty() ? all : shallow;
      Cell c = pool[uniform_below(rng, pool.size())];
      frontier.erase(c);
      live.erase(c);
      --remaining;
      for (Cell d : {Cell{c.first + 1, c.second}, Cell{c.first - 1, c.second}, Cell{c.first, c.second + 1},
                     Cell{c.first, c.second - 1}})
        if (live.count(d)) frontier.insert(d);
    }
  }
  return GridSet2D::from_cells(s.lattice(), std::vector<Cell>(live.begin(), live.end()));
}

GeneratedPair generate(const GeneratorSpec& spec) {
  if (spec.resolution < 2 || spec.resolution > 4096) throw Error(ErrorCode::InvalidSpec, "resolution must lie in [2, 4096]");
  if (spec.biteFraction < 0 || spec.biteFraction > Rational(1, 4))
    throw Error(ErrorCode::InvalidSpec, "biteFraction must lie in [0, 1/4]");
  const std::int64_t q = spec.resolution;
  const LatticeSpec lattice(Rational(1), Rational(1), q);
  Rng rng(spec.seed);
  GeneratedPair out;

  auto finish = [&](GridSet2D baseA, GridSet2D baseB) {
    out.baseA = std::move(baseA);
    out.baseB = std::move(baseB);
    Rational fa = spec.biteFraction * out.baseA.cell_count(), fb = spec.biteFraction * out.baseB.cell_count();
    out.a = bite(out.baseA, round_half_up(fa), static_cast<int>(uniform_int(rng, 1, 3)), rng);
    out.b = bite(out.baseB, round_half_up(fb), static_cast<int>(uniform_int(rng, 1, 3)), rng);
    out.biteMassA = measure(out.baseA) - measure(out.a);
    out.biteMassB = measure(out.baseB) - measure(out.b);
    Rational m = max(measure(out.a), measure(out.b));
    out.rasterDefect = max(convexity_defect(out.baseA), convexity_defect(out.baseB)) / m;
  };

  switch (spec.kind) {
    case GeneratorKind::Rectangle: {
      std::int64_t w = q + uniform_int(rng, 0, q / 2);
      std::int64_t h = std::max<std::int64_t>(1, round_half_up(Rational(q * q, w)));
      GridSet2D r = GridSet2D::rectangle(lattice, 0, w, 0, h);
      finish(r, translated_copy(r, rng, q));
      break;
    }
    case GeneratorKind::Disk:
    case GeneratorKind::Ellipse:
    case GeneratorKind::BitePair: {
      Form f = spec.kind == GeneratorKind::Disk ? Form{1, 0, 1} : random_form(rng);
      GridSet2D e = raster_quadratic(lattice, f.a, f.b, f.c, radius_for_area(f.a, f.b, f.c, q, 1.0));
      finish(e, translated_copy(e, rng, q));
      break;
    }
    case GeneratorKind::RandomPolygon: {
      GridSet2D p = raster_polygon(lattice, random_polygon(rng));
      finish(p, translated_copy(p, rng, q));
      break;
    }
    case GeneratorKind::HomotheticPair: {
      Form f = random_form(rng);
      const double lambda = 1.0 + static_cast<double>(uniform_int(rng, -100, 100)) / 1000.0;
      GridSet2D e = raster_quadratic(lattice, f.a, f.b, f.c, radius_for_area(f.a, f.b, f.c, q, 1.0));
      GridSet2D g = raster_quadratic(lattice, f.a, f.b, f.c, radius_for_area(f.a, f.b, f.c, q, lambda * lambda));
      finish(e, translated_copy(g, rng, q));
      break;
    }
    case GeneratorKind::BlobPair: {
      auto blobs = [&]() {
        Form f = random_form(rng);
        GridSet2D d = raster_quadratic(lattice, f.a, f.b, f.c, radius_for_area(f.a, f.b, f.c, q, 0.5));
        std::int64_t gap = q * uniform_int(rng, 2, 4);
        return set_union(d, translate(d, gap, uniform_int(rng, -q / 4, q / 4)));
      };
      GridSet2D a = blobs();
      GridSet2D b = blobs();
      finish(a, translated_copy(b, rng, q));
      break;
    }
  }
  return out;
}

GridSet2D random_grid(Rng& rng, const LatticeSpec& lattice, std::int64_t maxSide) {
  const std::int64_t w = uniform_int(rng, 1, maxSide), h = uniform_int(rng, 1, maxSide);
  std::vector<Cell> cells;
  switch (uniform_below(rng, 3)) {
    case 0: {
      const std::int64_t n = uniform_int(rng, 1, 4);
      for (std::int64_t k = 0; k < n; ++k) {
        std::int64_t i0 = uniform_int(rng, 0, w - 1), i1 = uniform_int(rng, i0 + 1, w);
        std::int64_t j0 = uniform_int(rng, 0, h - 1), j1 = uniform_int(rng, j0 + 1, h);
        for (std::int64_t j = j0; j < j1; ++j)
          for (std::int64_t i = i0; i < i1; ++i) cells.emplace_back(i, j);
      }
      break;
    }
    case 1: {
      const std::uint64_t density = uniform_below(rng, 7) + 1;  // eighths
      for (std::int64_t j = 0; j < h; ++j)
        for (std::int64_t i = 0; i < w; ++i)
          if (uniform_below(rng, 8) < density) cells.emplace_back(i, j);
      break;
    }
    default: {
      for (std::int64_t i = 0; i < w; ++i) {
        std::int64_t j0 = uniform_int(rng, 0, h - 1), j1 = uniform_int(rng, j0, h);
        for (std::int64_t j = j0; j < j1; ++j) cells.emplace_back(i, j);
      }
      break;
    }
  }
  if (cells.empty()) cells.emplace_back(0, 0);
  return GridSet2D::from_cells(lattice, cells);
}

}  // namespace bmstab
