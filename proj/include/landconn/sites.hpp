// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// Site polygon sets and their JSON exchange format:
//
//   [ { "id": 1, "rings": [ [[x, y], [x, y], ...], ... ] }, ... ]
//
// Coordinates are planar meters in the grid's reference. Every ring is
// closed (first vertex repeated last) and has at least three distinct
// vertices. A site with several rings is filled under the even-odd rule,
// so inner rings act as holes.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "landconn/error.hpp"
#include "landconn/format.hpp"

namespace landconn {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

using Ring = std::vector<Point>;

struct SitePolygon {
  int site_id = 0;
  std::vector<Ring> rings;
};

using SitePolygonSet = std::vector<SitePolygon>;

inline void validate_ring(const Ring& ring, int site_id) {
  const std::string where = "site " + std::to_string(site_id);
  std::set<Point> distinct(ring.begin(), ring.end());
  if (distinct.size() < 3) {
    throw GeometryError(where + ": degenerate ring with " +
                        std::to_string(distinct.size()) +
                        " distinct vertices (need >= 3)");
  }
  if (ring.front() != ring.back()) {
    throw GeometryError(where + ": ring is not closed");
  }
  for (const auto& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError(where + ": non-finite coordinate");
    }
  }
}

inline void validate_sites(const SitePolygonSet& sites) {
  std::set<int> seen;
  for (const auto& s : sites) {
    if (s.site_id <= 0) {
      throw GeometryError("site id must be positive, got " +
                          std::to_string(s.site_id));
    }
    if (!seen.insert(s.site_id).second) {
      throw GeometryError("duplicate site id " + std::to_string(s.site_id));
    }
    if (s.rings.empty()) {
      throw GeometryError("site " + std::to_string(s.site_id) +
                          " has no rings");
    }
    for (const auto& r : s.rings) validate_ring(r, s.site_id);
  }
}

inline SitePolygonSet parse_sites_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("site polygons: ") + e.what(), "json");
  }
  if (!doc.is_array()) {
    throw ParseError("site polygons: top level must be an array", "json");
  }
  SitePolygonSet out;
  for (const auto& obj : doc) {
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("rings")) {
      throw ParseError("site polygons: each entry needs 'id' and 'rings'",
                       "id");
    }
    if (!obj["id"].is_number_integer()) {
      throw ParseError("site polygons: 'id' must be an integer", "id");
    }
    SitePolygon site;
    site.site_id = obj["id"].get<int>();
    if (!obj["rings"].is_array()) {
      throw ParseError("site polygons: 'rings' must be an array", "rings");
    }
    for (const auto& jr : obj["rings"]) {
      Ring ring;
      if (!jr.is_array()) {
        throw ParseError("site polygons: ring must be an array", "rings");
      }
      for (const auto& jp : jr) {
        if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() ||
            !jp[1].is_number()) {
          throw ParseError("site polygons: vertex must be [x, y]", "rings");
        }
        ring.push_back({jp[0].get<double>(), jp[1].get<double>()});
      }
      site.rings.push_back(std::move(ring));
    }
    out.push_back(std::move(site));
  }
  validate_sites(out);
  return out;
}

inline SitePolygonSet read_sites(const std::filesystem::path& path) {
  return parse_sites_json(read_text_file(path));
}

inline std::string format_sites_json(const SitePolygonSet& sites) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& s : sites) {
    nlohmann::json rings = nlohmann::json::array();
    for (const auto& r : s.rings) {
      nlohmann::json jr = nlohmann::json::array();
      for (const auto& p : r) jr.push_back({p.x, p.y});
      rings.push_back(std::move(jr));
    }
    doc.push_back({{"id", s.site_id}, {"rings", std::move(rings)}});
  }
  return doc.dump(1) + "\n";
}

/// Axis-aligned rectangle as a closed ring, counter-clockwise.
inline Ring rectangle_ring(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
}

}  // namespace landconn
