// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// Accumulated least-cost distance over a friction surface.
//
// Movement is 8-connected. A step between neighbours a and b costs
// (friction[a] + friction[b]) / 2 times the step length: cellsize for
// cardinal steps, cellsize * sqrt(2) for diagonal ones. Friction nodata is
// impassable. Unreachable cells hold +infinity.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "landconn/format.hpp"
#include "landconn/grid.hpp"
#include "landconn/subnets.hpp"

namespace landconn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct CostOptions {
  // When set, cells of subnets other than the source can be reached but
  // not crossed.
  bool opaque_subnets = false;
  unsigned threads = 1;
};

inline double step_length(int dr, int dc, double cellsize) {
  return (dr != 0 && dc != 0) ? cellsize * std::numbers::sqrt2 : cellsize;
}

inline double step_cost(double fa, double fb, int dr, int dc,
                        double cellsize) {
  return 0.5 * (fa + fb) * step_length(dr, dc, cellsize);
}

namespace detail {

// Multi-source Dijkstra. `expandable(idx)` gates relaxation out of a
// settled cell; `on_settle(idx)` returns true to stop early.
inline std::vector<double> dijkstra(
    const NumericGrid& friction, const std::vector<std::size_t>& seeds,
    const std::function<bool(std::size_t)>& expandable,
    const std::function<bool(std::size_t)>& on_settle) {
  const int R = friction.rows(), C = friction.cols();
  const double cs = friction.header().cellsize;
  std::vector<double> dist(friction.size(), kInf);
  std::vector<std::uint8_t> done(friction.size(), 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto s : seeds) {
    if (friction.is_nodata(s)) continue;
    if (dist[s] != 0.0) {
      dist[s] = 0.0;
      pq.push({0.0, s});
    }
  }
  while (!pq.empty()) {
    auto [d, idx] = pq.top();
    pq.pop();
    if (done[idx] || d > dist[idx]) continue;
    done[idx] = 1;
    if (on_settle && on_settle(idx)) break;
    if (expandable && !expandable(idx)) continue;
    const int r = static_cast<int>(idx / C), c = static_cast<int>(idx % C);
    const double fa = friction[idx];
    for (auto [dr, dc] : kNeighbors8) {
      int nr = r + dr, nc = c + dc;
      if (nr < 0 || nc < 0 || nr >= R || nc >= C) continue;
      auto nidx = static_cast<std::size_t>(nr) * C + nc;
      if (done[nidx] || friction.is_nodata(nidx)) continue;
      double nd = d + step_cost(fa, friction[nidx], dr, dc, cs);
      if (nd < dist[nidx]) {
        dist[nidx] = nd;
        pq.push({nd, nidx});
      }
    }
  }
  return dist;
}

inline std::vector<std::size_t> subnet_cells(const SubnetLabeling& labeling,
                                             int id) {
  std::vector<std::size_t> cells;
  const auto& g = labeling.labels;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_nodata(i) && g[i] == id) cells.push_back(i);
  }
  return cells;
}

inline std::function<bool(std::size_t)> opaque_gate(
    const SubnetLabeling& labeling, int source_id, const CostOptions& opts) {
  if (!opts.opaque_subnets) return {};
  const auto* g = &labeling.labels;
  return [g, source_id](std::size_t i) {
    if (g->is_nodata(i)) return true;
    int l = (*g)[i];
    return l == 0 || l == source_id;
  };
}

}  // namespace detail

/// Least-cost distance from any cell of `sources` (seeded at zero).
inline NumericGrid accumulated_cost(const NumericGrid& friction,
                                    const std::vector<std::size_t>& sources) {
  for (std::size_t i = 0; i < friction.size(); ++i) {
    if (!friction.is_nodata(i) && !(friction[i] >= 0.0)) {
      throw DataError("friction must be nonnegative");
    }
  }
  auto dist = detail::dijkstra(friction, sources, {}, {});
  NumericGrid out(friction.header(), kInf);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (friction.is_nodata(i)) {
      out.set_nodata(i);
    } else {
      out.set(i, dist[i]);
    }
  }
  return out;
}

inline NumericGrid cost_distance_from(const SubnetLabeling& labeling,
                                      const NumericGrid& friction,
                                      int source_subnet,
                                      const CostOptions& opts = {}) {
  require_aligned(labeling.labels, friction, "subnet labels vs friction");
  if (source_subnet < 1 ||
      static_cast<std::size_t>(source_subnet) > labeling.subnets.size()) {
    throw DataError("unknown source subnet " + std::to_string(source_subnet));
  }
  auto seeds = detail::subnet_cells(labeling, source_subnet);
  std::erase_if(seeds, [&](std::size_t i) { return friction.is_nodata(i); });
  if (seeds.empty()) {
    throw DataError("source subnet " + std::to_string(source_subnet) +
                    " has no passable cells");
  }
  for (std::size_t i = 0; i < friction.size(); ++i) {
    if (!friction.is_nodata(i) && !(friction[i] >= 0.0)) {
      throw DataError("friction must be nonnegative");
    }
  }
  auto dist = detail::dijkstra(friction, seeds,
                               detail::opaque_gate(labeling, source_subnet, opts),
                               {});
  NumericGrid out(friction.header(), kInf);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (friction.is_nodata(i)) {
      out.set_nodata(i);
    } else {
      out.set(i, dist[i]);
    }
  }
  return out;
}

/// Symmetric subnet-to-subnet least-cost matrix; index k is subnet k + 1.
struct CostMatrix {
  std::size_t n = 0;
  std::vector<double> costs;

  CostMatrix() = default;
  explicit CostMatrix(std::size_t size, double fill = kInf)
      : n(size), costs(size * size, fill) {
    for (std::size_t i = 0; i < n; ++i) at(i, i) = 0.0;
  }
  double& at(std::size_t i, std::size_t j) { return costs[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return costs[i * n + j]; }
  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;
};

/// Edge-to-edge costs: costs[i][j] is the minimum over cells of subnet j of
/// the surface seeded at subnet i. Each search stops once every other
/// subnet has a settled cell.
inline CostMatrix cost_matrix(const SubnetLabeling& labeling,
                              const NumericGrid& friction,
                              const CostOptions& opts = {}) {
  require_aligned(labeling.labels, friction, "subnet labels vs friction");
  for (std::size_t i = 0; i < friction.size(); ++i) {
    if (!friction.is_nodata(i) && !(friction[i] >= 0.0)) {
      throw DataError("friction must be nonnegative");
    }
  }
  const std::size_t n = labeling.subnets.size();
  CostMatrix raw(n);
  if (n <= 1) return raw;

  std::vector<std::vector<std::size_t>> seeds(n);
  for (std::size_t i = 0; i < labeling.labels.size(); ++i) {
    if (labeling.labels.is_nodata(i) || friction.is_nodata(i)) continue;
    int l = labeling.labels[i];
    if (l > 0) seeds[l - 1].push_back(i);
  }

  auto row = [&](std::size_t src) {
    const int source_id = static_cast<int>(src) + 1;
    if (seeds[src].empty()) return;  // stays unreachable
    std::vector<std::uint8_t> reached(n, 0);
    reached[src] = 1;
    std::size_t remaining = n - 1;
    const auto* labels = &labeling.labels;
    auto on_settle = [&](std::size_t idx) {
      if (labels->is_nodata(idx)) return false;
      int l = (*labels)[idx];
      if (l > 0 && !reached[l - 1]) {
        reached[l - 1] = 1;
        --remaining;
      }
      return remaining == 0;
    };
    auto dist = detail::dijkstra(friction, seeds[src],
                                 detail::opaque_gate(labeling, source_id, opts),
                                 on_settle);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == src) continue;
      double best = kInf;
      for (auto idx : seeds[j]) best = std::min(best, dist[idx]);
      raw.at(src, j) = best;
    }
  };

  unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) row(i);
      });
    }
  }

  CostMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double a = raw.at(i, j), b = raw.at(j, i);
      double v;
      if (std::isinf(a) || std::isinf(b)) {
        if (std::isinf(a) != std::isinf(b)) {
          throw InvariantError("cost matrix asymmetric reachability between "
                               "subnets " +
                               std::to_string(i + 1) + " and " +
                               std::to_string(j + 1));
        }
        v = kInf;
      } else {
        if (std::fabs(a - b) > 1e-6 * std::max(1.0, a)) {
          throw InvariantError("cost matrix asymmetric between subnets " +
                               std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + ": " +
                               format_number(a) + " vs " + format_number(b));
        }
        v = 0.5 * (a + b);
      }
      out.at(i, j) = v;
      out.at(j, i) = v;
    }
  }
  return out;
}

struct LeastCostPath {
  std::vector<Cell> cells;          // source cell first, target cell last
  std::vector<double> accumulated;  // surface value at each cell
  double total() const { return accumulated.empty() ? 0.0 : accumulated.back(); }
};

/// Restricts backtracking to cells that were allowed to relax neighbours,
/// matching a surface computed with opaque subnets.
struct TraceBarrier {
  const SubnetLabeling* labeling = nullptr;
  int source_subnet = 0;
};

/// Backtrace from `target` to a zero-cost cell. At each cell the
/// predecessor is the neighbour minimising surface + step cost; ties go to
/// the first neighbour in the order N, NE, E, SE, S, SW, W, NW.
inline LeastCostPath trace_path(const NumericGrid& cost_surface,
                                const NumericGrid& friction, Cell target,
                                const TraceBarrier& barrier = {}) {
  require_aligned(cost_surface, friction, "cost surface vs friction");
  if (!cost_surface.contains(target.row, target.col)) {
    throw DataError("trace target outside grid");
  }
  auto value = [&](int r, int c) {
    return cost_surface.is_nodata(r, c) ? kInf : cost_surface.at(r, c);
  };
  if (!std::isfinite(value(target.row, target.col))) {
    throw DataError("trace target at row " + std::to_string(target.row) +
                    ", col " + std::to_string(target.col) +
                    " is unreachable");
  }
  auto may_expand = [&](int r, int c) {
    if (!barrier.labeling) return true;
    const auto& g = barrier.labeling->labels;
    if (g.is_nodata(r, c)) return true;
    int l = g.at(r, c);
    return l == 0 || l == barrier.source_subnet;
  };
  const double cs = cost_surface.header().cellsize;
  std::vector<std::uint8_t> visited(cost_surface.size(), 0);
  std::vector<Cell> rev{target};
  visited[cost_surface.index(target.row, target.col)] = 1;
  Cell cur = target;
  while (value(cur.row, cur.col) > 0.0) {
    double best = kInf;
    Cell pick{-1, -1};
    for (auto [dr, dc] : kNeighbors8) {
      int nr = cur.row + dr, nc = cur.col + dc;
      if (!cost_surface.contains(nr, nc)) continue;
      if (visited[cost_surface.index(nr, nc)]) continue;
      if (friction.is_nodata(nr, nc) || !may_expand(nr, nc)) continue;
      double v = value(nr, nc);
      if (!std::isfinite(v)) continue;
      double cand = v + step_cost(friction.at(nr, nc),
                                  friction.at(cur.row, cur.col), dr, dc, cs);
      if (cand < best) {
        best = cand;
        pick = {nr, nc};
      }
    }
    if (pick.row < 0) {
      throw InvariantError("trace_path: dead end before reaching a source");
    }
    cur = pick;
    visited[cost_surface.index(cur.row, cur.col)] = 1;
    rev.push_back(cur);
  }
  LeastCostPath path;
  path.cells.assign(rev.rbegin(), rev.rend());
  for (const auto& c : path.cells) path.accumulated.push_back(value(c.row, c.col));
  return path;
}

/// Cost matrix CSV: a header row of subnet ids (leading empty cell), then
/// one row per subnet with its id first; `inf` marks unreachable pairs.
inline std::string format_cost_matrix_csv(const CostMatrix& m) {
  std::string out = "subnet";
  for (std::size_t j = 0; j < m.n; ++j) out += "," + std::to_string(j + 1);
  out += "\n";
  for (std::size_t i = 0; i < m.n; ++i) {
    out += std::to_string(i + 1);
    for (std::size_t j = 0; j < m.n; ++j) out += "," + format_number(m.at(i, j));
    out += "\n";
  }
  return out;
}

inline CostMatrix parse_cost_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    auto l = trim(line);
    if (l.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      auto comma = l.find(',', start);
      f.emplace_back(trim(l.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(f));
  }
  if (rows.empty() || rows[0].empty() || rows[0][0] != "subnet") {
    throw ParseError("cost matrix: missing header row", "header");
  }
  const std::size_t n = rows[0].size() - 1;
  if (rows.size() != n + 1) {
    throw ParseError("cost matrix: expected " + std::to_string(n) +
                         " rows, found " + std::to_string(rows.size() - 1),
                     "rows");
  }
  CostMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[0][i + 1] != std::to_string(i + 1) ||
        rows[i + 1].size() != n + 1 || rows[i + 1][0] != std::to_string(i + 1)) {
      throw ParseError("cost matrix: malformed row " + std::to_string(i + 1),
                       "rows");
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto v = parse_double(rows[i + 1][j + 1]);
      if (!v || std::isnan(*v) || *v < 0.0) {
        throw ParseError("cost matrix: bad value '" + rows[i + 1][j + 1] + "'",
                         "value");
      }
      m.at(i, j) = *v;
    }
  }
  return m;
}

}  // namespace landconn
