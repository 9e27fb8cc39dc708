#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bmstab/rational.hpp"

namespace bmstab {

struct LatticeSpec {
  Rational hx{1};
  Rational hy{1};
  std::int64_t q = 1;

  LatticeSpec() = default;
  LatticeSpec(Rational hx_, Rational hy_, std::int64_t q_);

  Rational cell_width() const { return Rational(hx / q); }
  Rational cell_height() const { return Rational(hy / q); }
  Rational cell_area() const { return Rational(hx * hy / (q * q)); }

  friend bool operator==(const LatticeSpec& a, const LatticeSpec& b) {
    return a.hx == b.hx && a.hy == b.hy && a.q == b.q;
  }
};

/// Half-open integer run [begin, end).
struct Run {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - begin; }
  friend bool operator==(const Run&, const Run&) = default;
};

using Interval = Run;

/// Sorts, merges overlapping and adjacent runs, drops empty ones.
void normalize_runs(std::vector<Run>& runs);

class Set1D {
 public:
  Set1D();
  explicit Set1D(Rational scale, std::vector<Run> runs = {});

  const Rational& scale() const { return scale_; }
  const std::vector<Run>& runs() const { return runs_; }

  bool empty() const { return runs_.empty(); }
  std::int64_t count() const;
  Rational length() const { return Rational(scale_ * count()); }
  bool contains(std::int64_t cell) const;

  /// Index of the first and one past the last cell. Requires nonempty.
  std::int64_t inf_index() const;
  std::int64_t sup_index() const;
  Interval hull() const;

  Set1D intersect(const Interval& window) const;
  Set1D minus(const Interval& window) const;

  friend bool operator==(const Set1D& a, const Set1D& b) {
    return a.scale_ == b.scale_ && a.runs_ == b.runs_;
  }

 private:
  Rational scale_;
  std::vector<Run> runs_;
};

class GridSet2D {
 public:
  using Rows = std::map<std::int64_t, std::vector<Run>>;

  GridSet2D() = default;
  explicit GridSet2D(LatticeSpec lattice);
  GridSet2D(LatticeSpec lattice, Rows rows);

  static GridSet2D from_cells(const LatticeSpec& lattice,
                              const std::vector<std::pair<std::int64_t, std::int64_t>>& cells);
  /// Cells i0 <= i < i1, j0 <= j < j1.
  static GridSet2D rectangle(const LatticeSpec& lattice, std::int64_t i0, std::int64_t i1,
                             std::int64_t j0, std::int64_t j1);

  const LatticeSpec& lattice() const { return lattice_; }
  const Rows& rows() const { return rows_; }

  bool empty() const { return rows_.empty(); }
  std::int64_t cell_count() const { return count_; }
  bool contains(std::int64_t i, std::int64_t j) const;

  std::vector<std::pair<std::int64_t, std::int64_t>> cells() const;

  struct Box {
    std::int64_t i0, i1, j0, j1;  // half-open
  };
  /// Index bounding box. Requires nonempty.
  Box bounds() const;

  GridSet2D with_lattice(const LatticeSpec& lattice) const;

  friend bool operator==(const GridSet2D& a, const GridSet2D& b) {
    return a.lattice_ == b.lattice_ && a.rows_ == b.rows_;
  }

 private:
  void normalize();

  LatticeSpec lattice_;
  Rows rows_;
  std::int64_t count_ = 0;
};

Rational measure(const GridSet2D& s);

/// y-runs of the occupied cells in one column, scale hy/q.
Set1D slice(const GridSet2D& s, std::int64_t column);

/// Every nonempty column with its y-runs, in ascending column order.
std::map<std::int64_t, std::vector<Run>> column_runs(const GridSet2D& s);

/// Occupied column indices, scale hx/q.
Set1D project_x(const GridSet2D& s);

GridSet2D refine(const GridSet2D& s, std::int64_t k);
GridSet2D anisotropic_scale(const GridSet2D& s, const Rational& r);

/// Column i moves by floor(slope * i * cellWidth / cellHeight + 1/2) cells.
GridSet2D discrete_shear(const GridSet2D& s, const Rational& slope);
std::int64_t shear_offset(const LatticeSpec& lattice, const Rational& slope, std::int64_t column);

GridSet2D rotate90(const GridSet2D& s);
GridSet2D translate(const GridSet2D& s, std::int64_t di, std::int64_t dj);

/// Moves whole columns vertically; `offsets` is indexed by column.
GridSet2D shift_columns(const GridSet2D& s, const std::map<std::int64_t, std::int64_t>& offsets);

/// Keeps the columns c0 <= i < c1.
GridSet2D clip_columns(const GridSet2D& s, std::int64_t c0, std::int64_t c1);

GridSet2D set_union(const GridSet2D& a, const GridSet2D& b);
GridSet2D set_intersection(const GridSet2D& a, const GridSet2D& b);
GridSet2D set_difference(const GridSet2D& a, const GridSet2D& b);
bool is_subset(const GridSet2D& a, const GridSet2D& b);

}  // namespace bmstab
