// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end run for one analysis unit:
//   rasterize -> label -> classify -> friction -> cost matrix -> indices
// Every intermediate layer and table is written to the output directory.

#pragma once

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "landconn/ascii_grid.hpp"
#include "landconn/costdist.hpp"
#include "landconn/friction.hpp"
#include "landconn/indices.hpp"
#include "landconn/morphology.hpp"
#include "landconn/rasterize.hpp"
#include "landconn/render.hpp"
#include "landconn/report.hpp"
#include "landconn/sites.hpp"
#include "landconn/subnets.hpp"

namespace landconn {

/// Flat JSON run configuration. Relative input paths resolve against the
/// directory holding the config file.
struct PipelineConfig {
  std::string unit = "unit";
  std::string sites;           // site polygons JSON (required)
  std::string landcover;       // land-cover grid (required)
  std::string roads;           // optional
  std::string crossings;       // optional
  std::string landscape_mask;  // optional; defaults to landcover coverage
  std::string friction_table;  // optional; defaults to the shipped table
  std::string output_dir = "out";
  std::optional<double> cellsize;  // must match the grids when given
  int connectivity = 8;
  int edge_width = 1;
  double dist50 = kDefaultDist50;
  double p_iso = kDefaultIsolationThreshold;
  bool opaque_subnets = false;
  unsigned threads = 1;

  void validate() const {
    validate_unit_name(unit);
    if (sites.empty()) throw ConfigError("config: 'sites' is required");
    if (landcover.empty()) throw ConfigError("config: 'landcover' is required");
    if (output_dir.empty()) throw ConfigError("config: 'output_dir' is empty");
    if (connectivity != 4 && connectivity != 8) {
      throw ConfigError("config: connectivity must be 4 or 8");
    }
    if (edge_width < 1) throw ConfigError("config: edge_width must be >= 1");
    if (!(dist50 > 0.0) || !std::isfinite(dist50)) {
      throw ConfigError("config: dist50 must be > 0");
    }
    if (!(p_iso > 0.0 && p_iso < 1.0)) {
      throw ConfigError("config: p_iso must lie in (0, 1)");
    }
    if (cellsize && !(*cellsize > 0.0)) {
      throw ConfigError("config: cellsize must be > 0");
    }
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
  }
};

inline nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["unit"] = c.unit;
  j["sites"] = c.sites;
  j["landcover"] = c.landcover;
  j["roads"] = c.roads;
  j["crossings"] = c.crossings;
  j["landscape_mask"] = c.landscape_mask;
  j["friction_table"] = c.friction_table;
  j["output_dir"] = c.output_dir;
  if (c.cellsize) {
    j["cellsize"] = *c.cellsize;
  } else {
    j["cellsize"] = nullptr;
  }
  j["connectivity"] = c.connectivity;
  j["edge_width"] = c.edge_width;
  j["dist50"] = c.dist50;
  j["p_iso"] = c.p_iso;
  j["opaque_subnets"] = c.opaque_subnets;
  j["threads"] = c.threads;
  return j;
}

inline std::string format_config(const PipelineConfig& c) {
  return config_to_json(c).dump(2) + "\n";
}

inline PipelineConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  PipelineConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& key = it.key();
      const auto& v = it.value();
      if (key == "unit") c.unit = v.get<std::string>();
      else if (key == "sites") c.sites = v.get<std::string>();
      else if (key == "landcover") c.landcover = v.get<std::string>();
      else if (key == "roads") c.roads = v.get<std::string>();
      else if (key == "crossings") c.crossings = v.get<std::string>();
      else if (key == "landscape_mask") c.landscape_mask = v.get<std::string>();
      else if (key == "friction_table") c.friction_table = v.get<std::string>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "cellsize") {
        if (!v.is_null()) c.cellsize = v.get<double>();
      } else if (key == "connectivity") c.connectivity = v.get<int>();
      else if (key == "edge_width") c.edge_width = v.get<int>();
      else if (key == "dist50") c.dist50 = v.get<double>();
      else if (key == "p_iso") c.p_iso = v.get<double>();
      else if (key == "opaque_subnets") c.opaque_subnets = v.get<bool>();
      else if (key == "threads") c.threads = v.get<unsigned>();
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: wrong value type: ") + e.what());
  }
  c.validate();
  return c;
}

/// Re-raises `e` with the failing stage prefixed, keeping its category.
[[noreturn]] inline void rethrow_with_stage(const std::string& stage) {
  const std::string p = "[" + stage + "] ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(p + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(p + e.what());
  } catch (const DataError& e) {
    throw DataError(p + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(p + e.what());
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::exception& e) {
    throw InvariantError(p + e.what());
  }
}

template <typename F>
auto run_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (...) {
    rethrow_with_stage(stage);
  }
}

struct PipelineResult {
  ConnectivityReport report;
  RasterizedSites rasterized;
  SubnetLabeling labeling;
  std::vector<SubnetStructure> structures;
  NumericGrid friction;
  CostMatrix costs;
};

inline void check_labeling(const SubnetLabeling& l) {
  std::size_t site_cells = 0, sum = 0;
  for (std::size_t i = 0; i < l.labels.size(); ++i) {
    if (!l.labels.is_nodata(i) && l.labels[i] != 0) ++site_cells;
  }
  for (std::size_t k = 0; k < l.subnets.size(); ++k) {
    if (l.subnets[k].id != static_cast<int>(k) + 1) {
      throw InvariantError("subnet ids not contiguous");
    }
    sum += l.subnets[k].cell_count;
  }
  if (sum != site_cells) {
    throw InvariantError("subnet cell counts do not partition the site cells");
  }
}

inline void check_friction(const NumericGrid& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.is_nodata(i) && !(f[i] >= 0.0)) {
      throw InvariantError("negative friction in output surface");
    }
  }
}

inline void check_costs(const CostMatrix& m) {
  for (std::size_t i = 0; i < m.n; ++i) {
    if (m.at(i, i) != 0.0) throw InvariantError("nonzero self-cost");
    for (std::size_t j = 0; j < m.n; ++j) {
      if (!(m.at(i, j) >= 0.0)) throw InvariantError("negative cost");
      if (m.at(i, j) != m.at(j, i)) throw InvariantError("asymmetric costs");
    }
  }
}

inline std::filesystem::path resolve(const std::filesystem::path& base,
                                     const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

using LogFn = std::function<void(const std::string&)>;

inline PipelineResult run_pipeline(const PipelineConfig& config,
                                   const std::filesystem::path& base_dir = {},
                                   const LogFn& log = {}) {
  auto note = [&](const std::string& m) {
    if (log) log(m);
  };
  run_stage("config", [&] { config.validate(); });
  const auto out_dir = resolve(base_dir, config.output_dir);
  run_stage("output", [&] {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  });
  auto out = [&](const char* name) { return out_dir / name; };
  const auto conn = connectivity_from_int(config.connectivity);

  // Load inputs.
  note("loading inputs");
  auto landcover = run_stage("load landcover", [&] {
    return read_categorical_grid(resolve(base_dir, config.landcover));
  });
  auto opt_grid = [&](const std::string& p, const char* what) {
    return run_stage(std::string("load ") + what, [&]() -> std::optional<CategoricalGrid> {
      if (p.empty()) return std::nullopt;
      auto g = read_categorical_grid(resolve(base_dir, p));
      require_aligned(landcover, g, what);
      return g;
    });
  };
  auto roads = opt_grid(config.roads, "roads");
  auto crossings = opt_grid(config.crossings, "crossings");
  auto mask = opt_grid(config.landscape_mask, "landscape mask");
  auto polygons = run_stage("load sites", [&] {
    return read_sites(resolve(base_dir, config.sites));
  });
  auto table = run_stage("load friction table", [&] {
    if (config.friction_table.empty()) return default_friction_table();
    return parse_friction_table(
        read_text_file(resolve(base_dir, config.friction_table)));
  });
  const GridHeader& hdr = landcover.header();
  if (config.cellsize && *config.cellsize != hdr.cellsize) {
    throw ConfigError("[config] cellsize " + format_number(*config.cellsize) +
                      " does not match the land-cover grid (" +
                      format_number(hdr.cellsize) + ")");
  }
  // The analysis unit: mask coverage, or land-cover coverage by default.
  CategoricalGrid unit(hdr, 1);
  for (std::size_t i = 0; i < unit.size(); ++i) {
    bool outside = mask ? mask->is_nodata(i) : landcover.is_nodata(i);
    if (outside) unit.set_nodata(i);
    if (!outside && landcover.is_nodata(i)) {
      throw DataError("[load landcover] land cover is nodata inside the "
                      "landscape mask at cell " + std::to_string(i));
    }
  }

  PipelineResult res;
  ReportParameters params;
  params.cellsize = hdr.cellsize;
  params.connectivity = config.connectivity;
  params.edge_width = config.edge_width;
  params.dist50 = config.dist50;
  params.p_iso = config.p_iso;
  params.opaque_subnets = config.opaque_subnets;
  params.friction_table = table;

  note("rasterizing " + std::to_string(polygons.size()) + " sites");
  res.rasterized = run_stage("rasterize", [&] {
    auto r = rasterize_sites(polygons, hdr);
    // Sites are clipped to the analysis unit.
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      if (unit.is_nodata(i)) r.grid.set(i, 0);
    }
    std::erase_if(r.overlaps, [&](const OverlapEntry& e) {
      return unit.is_nodata(e.cell.row, e.cell.col);
    });
    write_grid(r.grid, out("sites.asc"));
    write_text_file(out("overlaps.csv"), format_overlaps_csv(r.overlaps));
    return r;
  });
  for (const auto& w : res.rasterized.warnings) note("warning: " + w);

  note("labeling subnets");
  PatternStats stats;
  res.labeling = run_stage("label", [&] {
    auto l = label_subnets(res.rasterized.grid, res.rasterized.overlaps, conn);
    check_labeling(l);
    stats = pattern_stats(l, unit);
    if (stats.total_site_area > stats.landscape_area) {
      throw InvariantError("site area exceeds landscape area");
    }
    write_grid(l.labels, out("subnets.asc"));
    write_text_file(out("subnets.csv"), format_subnets_csv(l));
    render_map(l.labels, "categorical", out("subnets.ppm"));
    return l;
  });
  note(std::to_string(res.labeling.size()) + " subnets");

  MorphologyParams morph{config.edge_width, conn};
  res.structures = run_stage("classify", [&] {
    auto s = classify_subnets(res.labeling, morph);
    write_text_file(out("structure.csv"), format_structure_csv(s));
    return s;
  });

  res.friction = run_stage("friction", [&] {
    auto f = build_friction(landcover, roads ? &*roads : nullptr,
                            crossings ? &*crossings : nullptr, &res.labeling,
                            table);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (unit.is_nodata(i)) f.set_nodata(i);
    }
    check_friction(f);
    write_grid(f, out("friction.asc"));
    write_text_file(out("friction_table.csv"), format_friction_table(table));
    return f;
  });

  note("computing cost matrix");
  CostOptions copts{config.opaque_subnets, config.threads};
  res.costs = run_stage("costmatrix", [&] {
    auto m = cost_matrix(res.labeling, res.friction, copts);
    check_costs(m);
    write_text_file(out("costmatrix.csv"), format_cost_matrix_csv(m));
    return m;
  });

  run_stage("indices", [&] {
    UnitRecord rec;
    rec.unit = config.unit;
    rec.pattern = stats;
    rec.params = params;
    if (!res.labeling.subnets.empty()) {
      auto dp = dispersal_k(config.dist50);
      params.k = dp.k;
      rec.params.k = dp.k;
      rec.structure = structural_shares(res.structures);
      auto areas = res.labeling.areas();
      rec.functional = functional_indices(areas, res.costs,
                                          stats.landscape_area, dp,
                                          config.p_iso);
    } else {
      rec.params.k = dispersal_k(config.dist50).k;
    }
    validate_record(rec);
    res.report.units.push_back(std::move(rec));
  });

  run_stage("report", [&] {
    write_report(res.report, out("report.csv"));
    write_text_file(out("report.json"), format_report_json(res.report));
  });
  note("done");
  return res;
}

}  // namespace landconn
