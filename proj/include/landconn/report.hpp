// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "landconn/format.hpp"
#include "landconn/friction.hpp"
#include "landconn/indices.hpp"
#include "landconn/morphology.hpp"
#include "landconn/subnets.hpp"

namespace landconn {

struct ReportParameters {
  double cellsize = kDefaultCellSize;
  int connectivity = 8;
  int edge_width = 1;
  double dist50 = kDefaultDist50;
  double k = std::log(0.5) / kDefaultDist50;
  double p_iso = kDefaultIsolationThreshold;
  bool opaque_subnets = false;
  FrictionTable friction_table = default_friction_table();
};

/// All indices for one analysis unit. Structural and functional indices
/// are absent when the unit has no subnets.
struct UnitRecord {
  std::string unit;
  PatternStats pattern;
  std::optional<StructuralShares> structure;
  std::optional<FunctionalIndices> functional;
  ReportParameters params;

  std::optional<double> gap() const {
    if (!functional) return std::nullopt;
    return pattern.cover_fraction - functional->rpc;
  }
};

struct ConnectivityReport {
  std::vector<UnitRecord> units;
};

inline constexpr const char* kReportHeader =
    "unit,n_sites,n_subnets,median_area_km2,share_simple,share_complex,rpc,"
    "rapc,isolated_share,cover_fraction,gap";

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("NA");
}

inline void validate_unit_name(const std::string& unit) {
  if (unit.empty() || unit.find_first_of(",\n\r\"") != std::string::npos) {
    throw ConfigError("unit name must be non-empty without commas, quotes or "
                      "newlines: '" + unit + "'");
  }
}

/// Every fraction in [0, 1]; RPC bounded by the cover fraction; RAPC at
/// least 1/sqrt(n).
inline void validate_record(const UnitRecord& r) {
  auto frac = [&](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvariantError("unit '" + r.unit + "': " + what + " = " +
                           format_number(v) + " outside [0, 1]");
    }
  };
  frac(r.pattern.cover_fraction, "cover_fraction");
  if (r.structure) {
    frac(r.structure->share_simple, "share_simple");
    frac(r.structure->share_complex, "share_complex");
    if (std::fabs(r.structure->share_simple + r.structure->share_complex - 1.0) >
        1e-12) {
      throw InvariantError("unit '" + r.unit + "': structural shares do not sum to 1");
    }
  }
  if (r.functional) {
    frac(r.functional->rpc, "rpc");
    frac(r.functional->rapc, "rapc");
    frac(r.functional->isolated_share, "isolated_share");
    const double tol = 1e-12;
    if (r.functional->rpc > r.pattern.cover_fraction * (1 + tol) + tol) {
      throw InvariantError("unit '" + r.unit + "': rpc exceeds cover fraction");
    }
    double n = static_cast<double>(r.pattern.n_subnets);
    if (r.functional->rapc < (1.0 / std::sqrt(n)) * (1 - tol)) {
      throw InvariantError("unit '" + r.unit + "': rapc below 1/sqrt(n)");
    }
  }
}

inline std::string format_report_row(const UnitRecord& r) {
  std::optional<double> med_km2;
  if (r.pattern.median_subnet_area) med_km2 = *r.pattern.median_subnet_area / 1e6;
  std::string s = r.unit;
  s += "," + std::to_string(r.pattern.n_sites);
  s += "," + std::to_string(r.pattern.n_subnets);
  s += "," + format_optional(med_km2);
  s += "," + format_optional(r.structure ? std::optional(r.structure->share_simple)
                                         : std::nullopt);
  s += "," + format_optional(r.structure ? std::optional(r.structure->share_complex)
                                         : std::nullopt);
  s += "," + format_optional(r.functional ? std::optional(r.functional->rpc)
                                          : std::nullopt);
  s += "," + format_optional(r.functional ? std::optional(r.functional->rapc)
                                          : std::nullopt);
  s += "," + format_optional(r.functional
                                 ? std::optional(r.functional->isolated_share)
                                 : std::nullopt);
  s += "," + format_number(r.pattern.cover_fraction);
  s += "," + format_optional(r.gap());
  return s;
}

/// One header line plus one row per unit, sorted by unit name.
inline std::string format_report_csv(const ConnectivityReport& report) {
  std::vector<const UnitRecord*> rows;
  for (const auto& u : report.units) rows.push_back(&u);
  std::sort(rows.begin(), rows.end(),
            [](auto* a, auto* b) { return a->unit < b->unit; });
  std::string out = std::string(kReportHeader) + "\n";
  for (auto* r : rows) out += format_report_row(*r) + "\n";
  return out;
}

inline void write_report(const ConnectivityReport& report,
                         const std::filesystem::path& path) {
  for (const auto& u : report.units) {
    validate_unit_name(u.unit);
    validate_record(u);
  }
  write_text_file(path, format_report_csv(report));
}

/// Merges report CSVs into one, rows sorted by unit. Duplicate units are
/// rejected.
inline std::string merge_report_csvs(const std::vector<std::string>& texts) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& text : texts) {
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      auto l = trim(line);
      if (l.empty()) continue;
      if (header) {
        if (l != kReportHeader) {
          throw ParseError("report: unexpected header '" + std::string(l) + "'",
                           "header");
        }
        header = false;
        continue;
      }
      auto comma = l.find(',');
      if (comma == std::string_view::npos) {
        throw ParseError("report: malformed row '" + std::string(l) + "'", "row");
      }
      rows.emplace_back(std::string(l.substr(0, comma)), std::string(l));
    }
  }
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].first == rows[i - 1].first) {
      throw DataError("report: duplicate unit '" + rows[i].first + "'");
    }
  }
  std::string out = std::string(kReportHeader) + "\n";
  for (const auto& [unit, row] : rows) out += row + "\n";
  return out;
}

inline nlohmann::ordered_json to_json(const ReportParameters& p) {
  nlohmann::ordered_json table = nlohmann::ordered_json::object();
  for (const auto& [code, f] : p.friction_table.entries) {
    table[std::to_string(code)] = f;
  }
  table["ROAD"] = p.friction_table.road_friction;
  table["CROSSING"] = p.friction_table.crossing_friction;
  table["SITE"] = p.friction_table.site_friction;
  return {{"cellsize", p.cellsize},
          {"connectivity", p.connectivity},
          {"edge_width", p.edge_width},
          {"dist50", p.dist50},
          {"k", p.k},
          {"p_iso", p.p_iso},
          {"opaque_subnets", p.opaque_subnets},
          {"friction_table", table}};
}

/// Self-describing report: every index plus the parameter block used.
inline std::string format_report_json(const ConnectivityReport& report) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return nullptr;
  };
  nlohmann::ordered_json units = nlohmann::ordered_json::array();
  std::vector<const UnitRecord*> rows;
  for (const auto& u : report.units) rows.push_back(&u);
  std::sort(rows.begin(), rows.end(),
            [](auto* a, auto* b) { return a->unit < b->unit; });
  for (const auto* r : rows) {
    nlohmann::ordered_json u;
    u["unit"] = r->unit;
    u["n_sites"] = r->pattern.n_sites;
    u["n_subnets"] = r->pattern.n_subnets;
    u["median_subnet_area_m2"] = opt(r->pattern.median_subnet_area);
    u["total_site_area_m2"] = r->pattern.total_site_area;
    u["landscape_area_m2"] = r->pattern.landscape_area;
    u["cover_fraction"] = r->pattern.cover_fraction;
    u["share_simple"] = opt(r->structure ? std::optional(r->structure->share_simple)
                                         : std::nullopt);
    u["share_complex"] = opt(r->structure ? std::optional(r->structure->share_complex)
                                          : std::nullopt);
    u["rpc"] = opt(r->functional ? std::optional(r->functional->rpc) : std::nullopt);
    u["rapc"] = opt(r->functional ? std::optional(r->functional->rapc) : std::nullopt);
    u["isolated_share"] = opt(r->functional
                                  ? std::optional(r->functional->isolated_share)
                                  : std::nullopt);
    u["gap"] = opt(r->gap());
    u["parameters"] = to_json(r->params);
    units.push_back(std::move(u));
  }
  nlohmann::ordered_json doc;
  doc["units"] = std::move(units);
  return doc.dump(2) + "\n";
}

}  // namespace landconn
