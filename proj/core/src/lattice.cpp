#include "bmstab/lattice.hpp"

#include <algorithm>

#include "bmstab/error.hpp"

namespace bmstab {

namespace {

void require_same(const LatticeSpec& a, const LatticeSpec& b) {
  if (!(a == b)) throw Error(ErrorCode::LatticeMismatch, "operands live on different lattices");
}

std::vector<Run> intersect_runs(const std::vector<Run>& a, const std::vector<Run>& b) {
  std::vector<Run> out;
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    std::int64_t lo = std::max(a[x].begin, b[y].begin);
    std::int64_t hi = std::min(a[x].end, b[y].end);
    if (lo < hi) out.push_back({lo, hi});
    if (a[x].end < b[y].end) ++x; else ++y;
  }
  return out;
}

std::vector<Run> subtract_runs(const std::vector<Run>& a, const std::vector<Run>& b) {
  std::vector<Run> out;
  std::size_t y = 0;
  for (Run r : a) {
    while (y < b.size() && b[y].end <= r.begin) ++y;
    std::size_t k = y;
    std::int64_t cur = r.begin;
    while (k < b.size() && b[k].begin < r.end) {
      if (b[k].begin > cur) out.push_back({cur, b[k].begin});
      cur = std::max(cur, b[k].end);
      ++k;
    }
    if (cur < r.end) out.push_back({cur, r.end});
  }
  return out;
}

}  // namespace

LatticeSpec::LatticeSpec(Rational hx_, Rational hy_, std::int64_t q_)
    : hx(std::move(hx_)), hy(std::move(hy_)), q(q_) {
  if (hx <= 0 || hy <= 0 || q < 1)
    throw Error(ErrorCode::InvalidArgument, "lattice needs hx > 0, hy > 0, q >= 1");
}

void normalize_runs(std::vector<Run>& runs) {
  std::erase_if(runs, [](const Run& r) { return r.end <= r.begin; });
  std::sort(runs.begin(), runs.end(),
            [](const Run& a, const Run& b) { return a.begin < b.begin; });
  std::size_t w = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (w > 0 && runs[k].begin <= runs[w - 1].end) {
      runs[w - 1].end = std::max(runs[w - 1].end, runs[k].end);
    } else {
      runs[w++] = runs[k];
    }
  }
  runs.resize(w);
}

// ---- Set1D ----

Set1D::Set1D() : scale_(1) {}

Set1D::Set1D(Rational scale, std::vector<Run> runs) : scale_(std::move(scale)), runs_(std::move(runs)) {
  if (scale_ <= 0) throw Error(ErrorCode::InvalidArgument, "Set1D scale must be positive");
  normalize_runs(runs_);
}

std::int64_t Set1D::count() const {
  std::int64_t n = 0;
  for (const Run& r : runs_) n += r.length();
  return n;
}

bool Set1D::contains(std::int64_t cell) const {
  auto it = std::upper_bound(runs_.begin(), runs_.end(), cell,
                             [](std::int64_t c, const Run& r) { return c < r.begin; });
  if (it == runs_.begin()) return false;
  --it;
  return cell < it->end;
}

std::int64_t Set1D::inf_index() const {
  if (runs_.empty()) throw Error(ErrorCode::EmptySet, "inf of empty Set1D");
  return runs_.front().begin;
}

std::int64_t Set1D::sup_index() const {
  if (runs_.empty()) throw Error(ErrorCode::EmptySet, "sup of empty Set1D");
  return runs_.back().end;
}

Interval Set1D::hull() const { return {inf_index(), sup_index()}; }

Set1D Set1D::intersect(const Interval& window) const {
  return Set1D(scale_, intersect_runs(runs_, {window}));
}

Set1D Set1D::minus(const Interval& window) const {
  return Set1D(scale_, subtract_runs(runs_, {window}));
}

// ---- GridSet2D ----

GridSet2D::GridSet2D(LatticeSpec lattice) : lattice_(std::move(lattice)) {}

GridSet2D::GridSet2D(LatticeSpec lattice, Rows rows)
    : lattice_(std::move(lattice)), rows_(std::move(rows)) {
  normalize();
}

void GridSet2D::normalize() {
  count_ = 0;
  for (auto it = rows_.begin(); it != rows_.end();) {
    normalize_runs(it->second);
    if (it->second.empty()) {
      it = rows_.erase(it);
      continue;
    }
    for (const Run& r : it->second) count_ += r.length();
    ++it;
  }
}

GridSet2D GridSet2D::from_cells(const LatticeSpec& lattice,
                                const std::vector<std::pair<std::int64_t, std::int64_t>>& cells) {
  Rows rows;
  for (auto [i, j] : cells) rows[j].push_back({i, i + 1});
  return GridSet2D(lattice, std::move(rows));
}

GridSet2D GridSet2D::rectangle(const LatticeSpec& lattice, std::int64_t i0, std::int64_t i1,
                               std::int64_t j0, std::int64_t j1) {
  Rows rows;
  if (i0 < i1)
    for (std::int64_t j = j0; j < j1; ++j) rows[j].push_back({i0, i1});
  return GridSet2D(lattice, std::move(rows));
}

bool GridSet2D::contains(std::int64_t i, std::int64_t j) const {
  auto it = rows_.find(j);
  if (it == rows_.end()) return false;
  const auto& runs = it->second;
  auto r = std::upper_bound(runs.begin(), runs.end(), i,
                            [](std::int64_t c, const Run& run) { return c < run.begin; });
  if (r == runs.begin()) return false;
  --r;
  return i < r->end;
}

std::vector<std::pair<std::int64_t, std::int64_t>> GridSet2D::cells() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (const auto& [j, runs] : rows_)
    for (const Run& r : runs)
      for (std::int64_t i = r.begin; i < r.end; ++i) out.emplace_back(i, j);
  return out;
}

GridSet2D::Box GridSet2D::bounds() const {
  if (rows_.empty()) throw Error(ErrorCode::EmptySet, "bounds of empty set");
  Box b{rows_.begin()->second.front().begin, rows_.begin()->second.back().end,
        rows_.begin()->first, rows_.rbegin()->first + 1};
  for (const auto& [j, runs] : rows_) {
    b.i0 = std::min(b.i0, runs.front().begin);
    b.i1 = std::max(b.i1, runs.back().end);
  }
  return b;
}

GridSet2D GridSet2D::with_lattice(const LatticeSpec& lattice) const {
  GridSet2D out = *this;
  out.lattice_ = lattice;
  return out;
}

// ---- operations ----

Rational measure(const GridSet2D& s) {
  return Rational(s.lattice().cell_area() * s.cell_count());
}

Set1D slice(const GridSet2D& s, std::int64_t column) {
  std::vector<Run> runs;
  for (const auto& [j, row] : s.rows()) {
    if (!s.contains(column, j)) continue;
    if (!runs.empty() && runs.back().end == j) {
      runs.back().end = j + 1;
    } else {
      runs.push_back({j, j + 1});
    }
  }
  return Set1D(s.lattice().cell_height(), std::move(runs));
}

std::map<std::int64_t, std::vector<Run>> column_runs(const GridSet2D& s) {
  std::map<std::int64_t, std::vector<Run>> cols;
  for (const auto& [j, row] : s.rows()) {
    for (const Run& r : row) {
      for (std::int64_t i = r.begin; i < r.end; ++i) {
        auto& runs = cols[i];
        if (!runs.empty() && runs.back().end == j) {
          runs.back().end = j + 1;
        } else {
          runs.push_back({j, j + 1});
        }
      }
    }
  }
  return cols;
}

Set1D project_x(const GridSet2D& s) {
  std::vector<Run> runs;
  for (const auto& [j, row] : s.rows()) runs.insert(runs.end(), row.begin(), row.end());
  return Set1D(s.lattice().cell_width(), std::move(runs));
}

GridSet2D refine(const GridSet2D& s, std::int64_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "refinement factor must be >= 1");
  const LatticeSpec& l = s.lattice();
  LatticeSpec fine(l.hx, l.hy, l.q * k);
  if (k == 1) return s;
  GridSet2D::Rows rows;
  for (const auto& [j, row] : s.rows()) {
    std::vector<Run> scaled;
    scaled.reserve(row.size());
    for (const Run& r : row) scaled.push_back({r.begin * k, r.end * k});
    for (std::int64_t d = 0; d < k; ++d) rows.emplace(j * k + d, scaled);
  }
  return GridSet2D(fine, std::move(rows));
}

GridSet2D anisotropic_scale(const GridSet2D& s, const Rational& r) {
  if (r <= 0) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  const LatticeSpec& l = s.lattice();
  return s.with_lattice(LatticeSpec(Rational(l.hx * r), Rational(l.hy / r), l.q));
}

std::int64_t shear_offset(const LatticeSpec& lattice, const Rational& slope, std::int64_t column) {
  Rational v = slope * column * lattice.hx / lattice.hy;
  return round_half_up(v);
}

GridSet2D shift_columns(const GridSet2D& s, const std::map<std::int64_t, std::int64_t>& offsets) {
  GridSet2D::Rows rows;
  for (const auto& [i, runs] : column_runs(s)) {
    auto it = offsets.find(i);
    std::int64_t d = it == offsets.end() ? 0 : it->second;
    for (const Run& r : runs)
      for (std::int64_t j = r.begin; j < r.end; ++j) rows[j + d].push_back({i, i + 1});
  }
  return GridSet2D(s.lattice(), std::move(rows));
}

GridSet2D discrete_shear(const GridSet2D& s, const Rational& slope) {
  if (slope == 0 || s.empty()) return s;
  std::map<std::int64_t, std::int64_t> offsets;
  GridSet2D::Box b = s.bounds();
  for (std::int64_t i = b.i0; i < b.i1; ++i) offsets[i] = shear_offset(s.lattice(), slope, i);
  return shift_columns(s, offsets);
}

GridSet2D rotate90(const GridSet2D& s) {
  const LatticeSpec& l = s.lattice();
  GridSet2D::Rows rows;
  // (i, j) -> (-1 - j, i): row j becomes column -1-j, run [b,e) becomes rows b..e-1.
  for (const auto& [j, row] : s.rows())
    for (const Run& r : row)
      for (std::int64_t i = r.begin; i < r.end; ++i) rows[i].push_back({-1 - j, -j});
  return GridSet2D(LatticeSpec(l.hy, l.hx, l.q), std::move(rows));
}

GridSet2D translate(const GridSet2D& s, std::int64_t di, std::int64_t dj) {
  if (di == 0 && dj == 0) return s;
  GridSet2D::Rows rows;
  for (const auto& [j, row] : s.rows()) {
    std::vector<Run> moved;
    moved.reserve(row.size());
    for (const Run& r : row) moved.push_back({r.begin + di, r.end + di});
    rows.emplace(j + dj, std::move(moved));
  }
  return GridSet2D(s.lattice(), std::move(rows));
}

GridSet2D clip_columns(const GridSet2D& s, std::int64_t c0, std::int64_t c1) {
  GridSet2D::Rows rows;
  const std::vector<Run> window{{c0, c1}};
  for (const auto& [j, row] : s.rows()) {
    std::vector<Run> kept = intersect_runs(row, window);
    if (!kept.empty()) rows.emplace(j, std::move(kept));
  }
  return GridSet2D(s.lattice(), std::move(rows));
}

GridSet2D set_union(const GridSet2D& a, const GridSet2D& b) {
  require_same(a.lattice(), b.lattice());
  GridSet2D::Rows rows = a.rows();
  for (const auto& [j, row] : b.rows()) {
    auto& dst = rows[j];
    dst.insert(dst.end(), row.begin(), row.end());
  }
  return GridSet2D(a.lattice(), std::move(rows));
}

GridSet2D set_intersection(const GridSet2D& a, const GridSet2D& b) {
  require_same(a.lattice(), b.lattice());
  GridSet2D::Rows rows;
  for (const auto& [j, row] : a.rows()) {
    auto it = b.rows().find(j);
    if (it == b.rows().end()) continue;
    std::vector<Run> r = intersect_runs(row, it->second);
    if (!r.empty()) rows.emplace(j, std::move(r));
  }
  return GridSet2D(a.lattice(), std::move(rows));
}

GridSet2D set_difference(const GridSet2D& a, const GridSet2D& b) {
  require_same(a.lattice(), b.lattice());
  GridSet2D::Rows rows;
  for (const auto& [j, row] : a.rows()) {
    auto it = b.rows().find(j);
    if (it == b.rows().end()) {
      rows.emplace(j, row);
      continue;
    }
    std::vector<Run> r = subtract_runs(row, it->second);
    if (!r.empty()) rows.emplace(j, std::move(r));
  }
  return GridSet2D(a.lattice(), std::move(rows));
}

bool is_subset(const GridSet2D& a, const GridSet2D& b) {
  return set_difference(a, b).empty();
}

}  // namespace bmstab
