// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landconn/format.hpp"
#include "landconn/grid.hpp"
#include "landconn/subnets.hpp"

namespace landconn {

/// Dimensionless movement-cost multipliers. A path through friction-1 land
/// costs its geometric length in meters.
struct FrictionTable {
  std::map<int, double> entries;  // land-cover code -> multiplier
  double road_friction = 10.0;
  double crossing_friction = 2.0;
  double site_friction = 1.0;

  void validate() const {
    auto check = [](double v, const std::string& what) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("friction table: " + what +
                          " must be finite and >= 0");
      }
    };
    bool has_unit = false;
    for (const auto& [code, f] : entries) {
      check(f, "class " + std::to_string(code));
      has_unit = has_unit || f == 1.0;
    }
    check(road_friction, "ROAD");
    check(crossing_friction, "CROSSING");
    check(site_friction, "SITE");
    if (!has_unit) {
      throw DomainError(
          "friction table: at least one land-cover class must have friction 1");
    }
    if (crossing_friction > road_friction) {
      throw DomainError("friction table: CROSSING (" +
                        format_number(crossing_friction) +
                        ") exceeds ROAD (" + format_number(road_friction) +
                        ")");
    }
  }
};

/// Shipped defaults on CORINE level-3 codes. Ordinal only: green classes
/// 1, semi-natural 2, agriculture 5, artificial 20, water 30.
inline FrictionTable default_friction_table() {
  FrictionTable t;
  for (int c : {111, 112, 121, 122, 123, 124, 131, 132, 133, 141, 142})
    t.entries[c] = 20.0;
  for (int c : {211, 212, 213, 221, 222, 223, 231, 241, 242, 243, 244})
    t.entries[c] = 5.0;
  for (int c : {311, 312, 313, 321, 322, 323, 324}) t.entries[c] = 1.0;
  for (int c : {331, 332, 333, 334, 335, 411, 412, 421, 422, 423})
    t.entries[c] = 2.0;
  for (int c : {511, 512, 521, 522, 523}) t.entries[c] = 30.0;
  return t;
}

/// Codes present in the grid but absent from the table, ascending.
inline std::vector<int> validate_table(const FrictionTable& table,
                                       const CategoricalGrid& landcover) {
  std::set<int> missing;
  for (std::size_t i = 0; i < landcover.size(); ++i) {
    if (landcover.is_nodata(i)) continue;
    if (!table.entries.contains(landcover[i])) missing.insert(landcover[i]);
  }
  return {missing.begin(), missing.end()};
}

/// Per-cell friction with precedence landcover < road < crossing < site.
/// Road and crossing layers flag a cell with any nonzero value; nodata in
/// those layers means "no feature". Land-cover nodata stays nodata.
inline NumericGrid build_friction(const CategoricalGrid& landcover,
                                  const CategoricalGrid* roads,
                                  const CategoricalGrid* crossings,
                                  const SubnetLabeling* sites,
                                  const FrictionTable& table) {
  table.validate();
  if (roads) require_aligned(landcover, *roads, "landcover vs roads");
  if (crossings) require_aligned(landcover, *crossings, "landcover vs crossings");
  if (sites) require_aligned(landcover, sites->labels, "landcover vs subnets");
  auto missing = validate_table(table, landcover);
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) list += ", ";
      list += std::to_string(missing[i]);
    }
    throw DataError("friction table lacks land-cover codes: " + list);
  }
  auto flagged = [](const CategoricalGrid* g, std::size_t i) {
    return g && !g->is_nodata(i) && (*g)[i] != 0;
  };
  NumericGrid out(landcover.header(), 0.0);
  for (std::size_t i = 0; i < landcover.size(); ++i) {
    if (landcover.is_nodata(i)) {
      out.set_nodata(i);
      continue;
    }
    double f = table.entries.at(landcover[i]);
    if (flagged(roads, i)) f = table.road_friction;
    if (flagged(crossings, i)) f = table.crossing_friction;
    if (sites && !sites->labels.is_nodata(i) && sites->labels[i] != 0)
      f = table.site_friction;
    out.set(i, f);
  }
  return out;
}

/// Friction table CSV: header `code,friction`, one row per land-cover code,
/// plus reserved rows ROAD, CROSSING and SITE.
inline std::string format_friction_table(const FrictionTable& t) {
  std::string out = "code,friction\n";
  for (const auto& [code, f] : t.entries) {
    out += std::to_string(code) + "," + format_number(f) + "\n";
  }
  out += "ROAD," + format_number(t.road_friction) + "\n";
  out += "CROSSING," + format_number(t.crossing_friction) + "\n";
  out += "SITE," + format_number(t.site_friction) + "\n";
  return out;
}

inline FrictionTable parse_friction_table(const std::string& text) {
  FrictionTable t;
  t.entries.clear();
  std::istringstream in(text);
  std::string line;
  bool header = true, road = false, crossing = false, site = false;
  while (std::getline(in, line)) {
    auto l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    if (header) {
      if (l != "code,friction") {
        throw ParseError("friction table: bad header '" + std::string(l) + "'",
                         "header");
      }
      header = false;
      continue;
    }
    auto comma = l.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("friction table: bad row '" + std::string(l) + "'",
                       "row");
    }
    auto key = trim(l.substr(0, comma));
    auto val = parse_double(trim(l.substr(comma + 1)));
    if (!val) {
      throw ParseError("friction table: bad value in '" + std::string(l) + "'",
                       std::string(key));
    }
    if (key == "ROAD") {
      t.road_friction = *val;
      road = true;
    } else if (key == "CROSSING") {
      t.crossing_friction = *val;
      crossing = true;
    } else if (key == "SITE") {
      t.site_friction = *val;
      site = true;
    } else {
      auto code = parse_integer(key);
      if (!code) {
        throw ParseError("friction table: bad code '" + std::string(key) + "'",
                         std::string(key));
      }
      if (!t.entries.emplace(static_cast<int>(*code), *val).second) {
        throw ParseError("friction table: duplicate code " +
                             std::string(key),
                         std::string(key));
      }
    }
  }
  if (header) throw ParseError("friction table: empty file", "header");
  if (!road) throw ParseError("friction table: missing ROAD row", "ROAD");
  if (!crossing)
    throw ParseError("friction table: missing CROSSING row", "CROSSING");
  if (!site) throw ParseError("friction table: missing SITE row", "SITE");
  t.validate();
  return t;
}

}  // namespace landconn
