#pragma once

// Reference implementations used only by tests. Each one takes a different
// route from the library: dense bitmaps, brute-force enumeration, floating
// point supersampling, gift wrapping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "bmstab/lattice.hpp"

namespace oracle {

using Cell = std::pair<std::int64_t, std::int64_t>;

inline std::set<Cell> cell_set(const bmstab::GridSet2D& s) {
  std::set<Cell> out;
  for (const auto& c : s.cells()) out.insert(c);
  return out;
}

/// Closed cells c and d sum to the 2x2 block at c + d.
inline std::set<Cell> minkowski(const std::set<Cell>& a, const std::set<Cell>& b) {
  std::set<Cell> out;
  for (const Cell& x : a)
    for (const Cell& y : b)
      for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj) out.insert({x.first + y.first + di, x.second + y.second + dj});
  return out;
}

/// Dense-grid version: paint every covered point on a doubled grid of corners.
inline std::int64_t minkowski_count_dense(const std::set<Cell>& a, const std::set<Cell>& b) {
  std::int64_t i0 = INT64_MAX, j0 = INT64_MAX, i1 = INT64_MIN, j1 = INT64_MIN;
  for (const Cell& x : a)
    for (const Cell& y : b) {
      i0 = std::min(i0, x.first + y.first);
      j0 = std::min(j0, x.second + y.second);
      i1 = std::max(i1, x.first + y.first + 2);
      j1 = std::max(j1, x.second + y.second + 2);
    }
  const std::int64_t w = i1 - i0, h = j1 - j0;
  std::vector<char> grid(static_cast<std::size_t>(w * h), 0);
  for (const Cell& x : a)
    for (const Cell& y : b)
      for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
          grid[static_cast<std::size_t>((x.second + y.second + dj - j0) * w + (x.first + y.first + di - i0))] = 1;
  return std::accumulate(grid.begin(), grid.end(), std::int64_t{0});
}

/// Each cell as a k x k block at k * index.
inline std::set<Cell> blow_up(const std::set<Cell>& s, std::int64_t k) {
  std::set<Cell> out;
  for (const Cell& c : s)
    for (std::int64_t di = 0; di < k; ++di)
      for (std::int64_t dj = 0; dj < k; ++dj) out.insert({c.first * k + di, c.second * k + dj});
  return out;
}

// 1D, on cell index sets.
inline std::set<std::int64_t> sum_1d(const std::set<std::int64_t>& a, const std::set<std::int64_t>& b) {
  std::set<std::int64_t> out;
  for (std::int64_t x : a)
    for (std::int64_t y : b) {
      out.insert(x + y);
      out.insert(x + y + 1);
    }
  return out;
}

inline std::set<std::int64_t> from_mask(std::uint32_t m) {
  std::set<std::int64_t> out;
  for (int i = 0; i < 32; ++i)
    if (m >> i & 1u) out.insert(i);
  return out;
}

struct P {
  double x, y;
};

inline double cross(const P& o, const P& a, const P& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Jarvis march on integer corners; returns the hull area doubled.
inline std::int64_t hull_area2_gift_wrap(const std::set<Cell>& cells) {
  std::vector<Cell> pts;
  for (const Cell& c : cells)
    for (int di = 0; di < 2; ++di)
      for (int dj = 0; dj < 2; ++dj) pts.push_back({c.first + di, c.second + dj});
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto cr = [](const Cell& o, const Cell& a, const Cell& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<Cell> hull;
  Cell start = pts.front(), cur = start;
  do {
    hull.push_back(cur);
    Cell next = pts.front() == cur ? pts[1] : pts.front();
    for (const Cell& p : pts) {
      if (p == cur) continue;
      std::int64_t c = cr(cur, next, p);
      auto d2 = [&](const Cell& q) {
        return (q.first - cur.first) * (q.first - cur.first) + (q.second - cur.second) * (q.second - cur.second);
      };
      if (c < 0 || (c == 0 && d2(p) > d2(next))) next = p;
    }
    cur = next;
  } while (cur != start && hull.size() <= pts.size());
  std::int64_t a2 = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Cell& p = hull[i];
    const Cell& q = hull[(i + 1) % hull.size()];
    a2 += p.first * q.second - q.first * p.second;
  }
  return std::llabs(a2);
}

inline bool inside_convex(const std::vector<P>& poly, const P& x) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (cross(poly[i], poly[(i + 1) % poly.size()], x) < 0) return false;
  return true;
}

/// Area of the cells inside the polygon by k x k point sampling per cell.
inline double supersampled_clip(const std::set<Cell>& cells, double w, double h, const std::vector<P>& poly, int k) {
  double total = 0;
  for (const Cell& c : cells) {
    int in = 0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        in += inside_convex(poly, {(c.first + (a + 0.5) / k) * w, (c.second + (b + 0.5) / k) * h});
    total += w * h * in / (k * k);
  }
  return total;
}

inline double point_segment_distance(const P& p, const P& a, const P& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  double s = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - a.x - s * dx, p.y - a.y - s * dy);
}

inline double point_polygon_distance(const std::vector<P>& poly, const P& p) {
  if (inside_convex(poly, p)) return 0;
  double best = INFINITY;
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

/// Spearman without ties: 1 - 6 sum d^2 / (n (n^2 - 1)).
inline double spearman_no_ties(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto rank = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  std::vector<double> rx = rank(x), ry = rank(y);
  double d2 = 0;
  for (std::size_t i = 0; i < n; ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double nn = static_cast<double>(n);
  return 1 - 6 * d2 / (nn * (nn * nn - 1));
}

}  // namespace oracle
