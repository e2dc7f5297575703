// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "landconn/format.hpp"
#include "landconn/grid.hpp"
#include "landconn/sites.hpp"

namespace landconn {

/// A cell whose center lies inside more than one site.
struct OverlapEntry {
  Cell cell;
  std::vector<int> site_ids;  // ascending, size >= 2
  friend bool operator==(const OverlapEntry&, const OverlapEntry&) = default;
};

struct RasterizedSites {
  CategoricalGrid grid;  // 0 = background, otherwise lowest covering site id
  std::vector<OverlapEntry> overlaps;  // row-major order
  std::vector<std::string> warnings;
};

/// Even-odd crossing test with a half-open edge rule: an edge counts when
/// exactly one endpoint lies strictly above the scan line and the crossing
/// is strictly right of the point. Points on left or bottom edges are
/// therefore inside, points on right or top edges outside.
inline bool point_in_rings(const std::vector<Ring>& rings, double px,
                           double py) {
  bool inside = false;
  for (const auto& ring : rings) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      const Point& a = ring[i];
      const Point& b = ring[j];
      if ((a.y > py) != (b.y > py)) {
        // Relative to the edge start so results depend only on offsets.
        double t = (py - a.y) * (b.x - a.x) / (b.y - a.y);
        if (px - a.x < t) inside = !inside;
      }
    }
  }
  return inside;
}

/// Burns site ids into a grid with the template's geometry. A cell takes a
/// site's id iff its center is inside the site; where centers fall inside
/// several sites the lowest id is stored and the full list goes to the
/// overlap table.
inline RasterizedSites rasterize_sites(const SitePolygonSet& polygons,
                                       const GridHeader& tmpl) {
  tmpl.validate();
  validate_sites(polygons);

  std::vector<const SitePolygon*> order;
  for (const auto& s : polygons) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](auto* a, auto* b) { return a->site_id < b->site_id; });

  RasterizedSites out{CategoricalGrid(tmpl, 0), {}, {}};
  std::map<std::size_t, std::vector<int>> multi;

  for (const SitePolygon* site : order) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& r : site->rings) {
      for (const auto& p : r) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
      }
    }
    const double cs = tmpl.cellsize;
    // Conservative index range of cell centers inside the bounding box.
    auto clamp_to = [](double v, int hi) {
      return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(hi)));
    };
    int c0 = std::max(0, clamp_to(std::floor((xmin - tmpl.xllcorner) / cs - 0.5), tmpl.ncols));
    int c1 = std::min(tmpl.ncols - 1,
                      clamp_to(std::ceil((xmax - tmpl.xllcorner) / cs - 0.5), tmpl.ncols));
    int r0 = std::max(0, tmpl.nrows - 1 -
                             clamp_to(std::ceil((ymax - tmpl.yllcorner) / cs - 0.5), tmpl.nrows));
    int r1 = std::min(tmpl.nrows - 1,
                      tmpl.nrows - 1 -
                          clamp_to(std::floor((ymin - tmpl.yllcorner) / cs - 0.5), tmpl.nrows));

    std::size_t burned = 0;
    for (int r = r0; r <= r1; ++r) {
      const double py = tmpl.center_y(r);
      for (int c = c0; c <= c1; ++c) {
        if (!point_in_rings(site->rings, tmpl.center_x(c), py)) continue;
        ++burned;
        auto idx = out.grid.index(r, c);
        int cur = out.grid[idx];
        if (cur == 0) {
          out.grid.set(idx, site->site_id);
        } else {
          auto& ids = multi[idx];
          if (ids.empty()) ids.push_back(cur);
          ids.push_back(site->site_id);
        }
      }
    }
    if (burned == 0) {
      out.warnings.push_back("site " + std::to_string(site->site_id) +
                             " covers no cell center; zero cells burned");
    }
  }
  for (auto& [idx, ids] : multi) {
    out.overlaps.push_back({out.grid.cell_of(idx), ids});
  }
  return out;
}

inline std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(ids[i]);
  }
  return s;
}

inline std::vector<int> split_ids(std::string_view text) {
  std::vector<int> ids;
  text = trim(text);
  while (!text.empty()) {
    auto semi = text.find(';');
    auto tok = trim(text.substr(0, semi));
    auto v = parse_integer(tok);
    if (!v) throw ParseError("malformed id list '" + std::string(text) + "'",
                             "site_ids");
    ids.push_back(static_cast<int>(*v));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return ids;
}

/// Overlap side table as CSV: `row,col,site_ids`.
inline std::string format_overlaps_csv(const std::vector<OverlapEntry>& ov) {
  std::string out = "row,col,site_ids\n";
  for (const auto& e : ov) {
    out += std::to_string(e.cell.row) + "," + std::to_string(e.cell.col) +
           "," + join_ids(e.site_ids) + "\n";
  }
  return out;
}

inline std::vector<OverlapEntry> parse_overlaps_csv(const std::string& text) {
  std::vector<OverlapEntry> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    auto l = trim(line);
    if (l.empty()) continue;
    if (header) {
      if (l != "row,col,site_ids") {
        throw ParseError("overlap table: bad header '" + std::string(l) + "'",
                         "header");
      }
      header = false;
      continue;
    }
    auto c1 = l.find(',');
    auto c2 = l.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw ParseError("overlap table: bad row '" + std::string(l) + "'",
                       "row");
    }
    auto r = parse_integer(l.substr(0, c1));
    auto c = parse_integer(l.substr(c1 + 1, c2 - c1 - 1));
    if (!r || !c) {
      throw ParseError("overlap table: bad cell in '" + std::string(l) + "'",
                       "row");
    }
    out.push_back({{static_cast<int>(*r), static_cast<int>(*c)},
                   split_ids(l.substr(c2 + 1))});
  }
  return out;
}

}  // namespace landconn
