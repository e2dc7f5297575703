// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// landconn: protected-area network connectivity from rasters.
//
// Exit codes: 0 success, 2 configuration error, 3 input-data error,
// 4 internal invariant failure.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "landconn/ascii_grid.hpp"
#include "landconn/costdist.hpp"
#include "landconn/friction.hpp"
#include "landconn/indices.hpp"
#include "landconn/morphology.hpp"
#include "landconn/pipeline.hpp"
#include "landconn/rasterize.hpp"
#include "landconn/render.hpp"
#include "landconn/report.hpp"
#include "landconn/sites.hpp"
#include "landconn/subnets.hpp"

namespace fs = std::filesystem;
using namespace landconn;

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kInvariantError = 4,
};

void note(const std::string& msg) { std::cerr << "landconn: " << msg << "\n"; }

SubnetLabeling load_labeling(const std::string& labels,
                             const std::string& table) {
  auto grid = read_categorical_grid(labels);
  auto l = labeling_from_labels(grid);
  if (!table.empty()) {
    auto rows = parse_subnets_csv(read_text_file(table));
    if (rows.size() != l.subnets.size()) {
      throw DataError("subnet table has " + std::to_string(rows.size()) +
                      " rows, label grid has " +
                      std::to_string(l.subnets.size()) + " subnets");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].id != l.subnets[i].id ||
          rows[i].cell_count != l.subnets[i].cell_count) {
        throw DataError("subnet table row " + std::to_string(i + 1) +
                        " disagrees with the label grid");
      }
      l.subnets[i].member_site_ids = rows[i].member_site_ids;
    }
  }
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"landconn: structural and functional connectivity of "
               "protected-area networks"};
  app.require_subcommand(1);

  // rasterize
  std::string r_sites, r_template, r_out, r_overlaps;
  double r_cellsize = 0;
  auto* rasterize = app.add_subcommand("rasterize", "Burn site polygons into a grid");
  rasterize->add_option("--sites", r_sites, "Site polygons (JSON)")->required();
  rasterize->add_option("--template", r_template, "Grid whose header defines the raster")->required();
  rasterize->add_option("--out", r_out, "Output site grid (.asc)")->required();
  rasterize->add_option("--overlaps", r_overlaps, "Output overlap table (CSV)");
  rasterize->add_option("--cellsize", r_cellsize, "Expected cell size; must match the template");

  // subnets
  std::string s_sites, s_overlaps, s_out, s_table;
  int s_conn = 8;
  auto* subnets = app.add_subcommand("subnets", "Label subnet components");
  subnets->add_option("--sites", s_sites, "Site grid (.asc)")->required();
  subnets->add_option("--overlaps", s_overlaps, "Overlap table (CSV)");
  subnets->add_option("--out", s_out, "Output label grid (.asc)")->required();
  subnets->add_option("--table", s_table, "Output subnet table (CSV)");
  subnets->add_option("--connectivity", s_conn, "4 or 8")->check(CLI::IsMember({4, 8}));

  // classify
  std::string c_labels, c_out;
  int c_edge = 1, c_conn = 8;
  auto* classify = app.add_subcommand("classify", "Simple/complex subnet classification");
  classify->add_option("--labels", c_labels, "Label grid (.asc)")->required();
  classify->add_option("--out", c_out, "Output structure table (CSV)")->required();
  classify->add_option("--edge-width", c_edge, "Edge width in cells")->check(CLI::PositiveNumber);
  classify->add_option("--connectivity", c_conn, "4 or 8")->check(CLI::IsMember({4, 8}));

  // friction
  std::string f_lc, f_roads, f_cross, f_labels, f_table, f_out, f_dump;
  auto* friction = app.add_subcommand("friction", "Build the friction surface");
  friction->add_option("--landcover", f_lc, "Land-cover grid (.asc)")->required();
  friction->add_option("--roads", f_roads, "Road flag grid (.asc)");
  friction->add_option("--crossings", f_cross, "Crossing flag grid (.asc)");
  friction->add_option("--labels", f_labels, "Subnet label grid (.asc)");
  friction->add_option("--friction-table", f_table, "Friction table (CSV); shipped defaults if omitted");
  friction->add_option("--out", f_out, "Output friction grid (.asc)");
  friction->add_option("--dump-table", f_dump, "Write the effective friction table (CSV)");

  // costmatrix
  std::string m_sites, m_fric, m_out;
  bool m_opaque = false;
  unsigned m_threads = 1;
  auto* costm = app.add_subcommand("costmatrix", "Least-cost distances between subnets");
  costm->add_option("--sites", m_sites, "Subnet label grid (.asc)")->required();
  costm->add_option("--friction", m_fric, "Friction grid (.asc)")->required();
  costm->add_option("--out", m_out, "Output cost matrix (CSV)")->required();
  costm->add_flag("--opaque-subnets", m_opaque, "Forbid paths through third-party subnets");
  costm->add_option("--threads", m_threads, "Worker threads")->check(CLI::PositiveNumber);

  // indices
  std::string i_labels, i_table, i_costs, i_struct, i_mask, i_out, i_unit = "unit";
  double i_dist50 = kDefaultDist50, i_piso = kDefaultIsolationThreshold;
  auto* indices = app.add_subcommand("indices", "Connectivity indices for one unit");
  indices->add_option("--labels", i_labels, "Subnet label grid (.asc)")->required();
  indices->add_option("--subnet-table", i_table, "Subnet table (CSV), for site counts");
  indices->add_option("--costmatrix", i_costs, "Cost matrix (CSV)")->required();
  indices->add_option("--structure", i_struct, "Structure table (CSV)");
  indices->add_option("--mask", i_mask, "Landscape mask (.asc); defaults to the label grid extent");
  indices->add_option("--dist50", i_dist50, "Distance of 50% connection probability (m)");
  indices->add_option("--p-iso", i_piso, "Isolation probability threshold");
  indices->add_option("--unit", i_unit, "Analysis unit name");
  indices->add_option("--out", i_out, "Output report (CSV); stdout if omitted");

  // report
  std::vector<std::string> p_in;
  std::string p_out;
  auto* report = app.add_subcommand("report", "Merge per-unit reports");
  report->add_option("--in", p_in, "Report CSV files")->required();
  report->add_option("--out", p_out, "Merged report (CSV); stdout if omitted");

  // render
  std::string g_grid, g_palette = "categorical", g_out;
  int g_classes = 5;
  auto* render = app.add_subcommand("render", "Render a grid to PPM with a legend");
  render->add_option("--grid", g_grid, "Grid (.asc)")->required();
  render->add_option("--palette", g_palette, "categorical, greens, viridis or rdylgn");
  render->add_option("--classes", g_classes, "Classes for numeric grids (1-9)");
  render->add_option("--out", g_out, "Output image (.ppm)")->required();

  // run
  std::string u_config, u_dump;
  PipelineConfig cfg;
  double u_cellsize = 0;
  auto* run = app.add_subcommand("run", "Full pipeline for one analysis unit");
  run->add_option("--config", u_config, "Pipeline config (JSON); flags override its values");
  run->add_option("--unit", cfg.unit, "Analysis unit name");
  run->add_option("--sites", cfg.sites, "Site polygons (JSON)");
  run->add_option("--landcover", cfg.landcover, "Land-cover grid (.asc)");
  run->add_option("--roads", cfg.roads, "Road flag grid (.asc)");
  run->add_option("--crossings", cfg.crossings, "Crossing flag grid (.asc)");
  run->add_option("--mask", cfg.landscape_mask, "Landscape mask (.asc)");
  run->add_option("--friction-table", cfg.friction_table, "Friction table (CSV)");
  run->add_option("--out", cfg.output_dir, "Output directory");
  run->add_option("--cellsize", u_cellsize, "Expected cell size (m)");
  run->add_option("--connectivity", cfg.connectivity, "4 or 8");
  run->add_option("--edge-width", cfg.edge_width, "Edge width in cells");
  run->add_option("--dist50", cfg.dist50, "Distance of 50% connection probability (m)");
  run->add_option("--p-iso", cfg.p_iso, "Isolation probability threshold");
  run->add_flag("--opaque-subnets", cfg.opaque_subnets, "Forbid paths through third-party subnets");
  run->add_option("--threads", cfg.threads, "Worker threads for the cost matrix");
  run->add_option("--dump-config", u_dump, "Write the effective config (JSON) and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*rasterize) {
      auto polygons = read_sites(r_sites);
      auto tmpl = read_grid(r_template);
      GridHeader hdr = std::visit([](const auto& g) { return g.header(); }, tmpl);
      if (r_cellsize > 0 && r_cellsize != hdr.cellsize) {
        throw ConfigError("--cellsize does not match the template grid");
      }
      auto r = rasterize_sites(polygons, hdr);
      for (const auto& w : r.warnings) note("warning: " + w);
      write_grid(r.grid, r_out);
      if (!r_overlaps.empty()) {
        write_text_file(r_overlaps, format_overlaps_csv(r.overlaps));
      }
      note("burned " + std::to_string(polygons.size()) + " sites, " +
          std::to_string(r.overlaps.size()) + " overlap cells");
    } else if (*subnets) {
      auto grid = read_categorical_grid(s_sites);
      std::vector<OverlapEntry> ov;
      if (!s_overlaps.empty()) ov = parse_overlaps_csv(read_text_file(s_overlaps));
      auto l = label_subnets(grid, ov, connectivity_from_int(s_conn));
      write_grid(l.labels, s_out);
      if (!s_table.empty()) write_text_file(s_table, format_subnets_csv(l));
      note(std::to_string(l.size()) + " subnets");
    } else if (*classify) {
      auto l = labeling_from_labels(read_categorical_grid(c_labels));
      auto s = classify_subnets(l, {c_edge, connectivity_from_int(c_conn)});
      write_text_file(c_out, format_structure_csv(s));
    } else if (*friction) {
      auto lc = read_categorical_grid(f_lc);
      std::optional<CategoricalGrid> roads, cross;
      std::optional<SubnetLabeling> labels;
      if (!f_roads.empty()) roads = read_categorical_grid(f_roads);
      if (!f_cross.empty()) cross = read_categorical_grid(f_cross);
      if (!f_labels.empty()) labels = labeling_from_labels(read_categorical_grid(f_labels));
      FrictionTable table = f_table.empty()
                                ? default_friction_table()
                                : parse_friction_table(read_text_file(f_table));
      if (!f_dump.empty()) write_text_file(f_dump, format_friction_table(table));
      if (!f_out.empty()) {
        auto f = build_friction(lc, roads ? &*roads : nullptr,
                                cross ? &*cross : nullptr,
                                labels ? &*labels : nullptr, table);
        write_grid(f, f_out);
      }
    } else if (*costm) {
      auto l = labeling_from_labels(read_categorical_grid(m_sites));
      auto f = read_numeric_grid(m_fric);
      auto m = cost_matrix(l, f, {m_opaque, m_threads});
      check_costs(m);
      write_text_file(m_out, format_cost_matrix_csv(m));
    } else if (*indices) {
      auto l = load_labeling(i_labels, i_table);
      auto costs = parse_cost_matrix_csv(read_text_file(i_costs));
      if (costs.n != l.size()) {
        throw DataError("cost matrix size " + std::to_string(costs.n) +
                        " does not match " + std::to_string(l.size()) +
                        " subnets");
      }
      CategoricalGrid mask = i_mask.empty() ? CategoricalGrid(l.labels.header(), 1)
                                            : read_categorical_grid(i_mask);
      if (i_mask.empty()) {
        for (std::size_t k = 0; k < mask.size(); ++k) {
          if (l.labels.is_nodata(k)) mask.set_nodata(k);
        }
      }
      UnitRecord rec;
      rec.unit = i_unit;
      validate_unit_name(rec.unit);
      rec.pattern = pattern_stats(l, mask);
      rec.params.cellsize = l.labels.header().cellsize;
      rec.params.dist50 = i_dist50;
      rec.params.p_iso = i_piso;
      auto dp = dispersal_k(i_dist50);
      rec.params.k = dp.k;
      if (!i_struct.empty()) {
        auto st = parse_structure_csv(read_text_file(i_struct));
        if (st.size() != l.size()) {
          throw DataError("structure table does not match the label grid");
        }
        if (!st.empty()) rec.structure = structural_shares(st);
      }
      if (l.size() > 0) {
        rec.functional = functional_indices(l.areas(), costs,
                                            rec.pattern.landscape_area, dp, i_piso);
      }
      validate_record(rec);
      ConnectivityReport rep{{rec}};
      if (i_out.empty()) {
        std::cout << format_report_csv(rep);
      } else {
        write_report(rep, i_out);
      }
    } else if (*report) {
      std::vector<std::string> texts;
      for (const auto& p : p_in) texts.push_back(read_text_file(p));
      auto merged = merge_report_csvs(texts);
      if (p_out.empty()) {
        std::cout << merged;
      } else {
        write_text_file(p_out, merged);
      }
    } else if (*render) {
      auto g = read_grid(g_grid);
      std::visit([&](const auto& grid) { render_map(grid, g_palette, g_out, g_classes); }, g);
    } else if (*run) {
      fs::path base;
      if (!u_config.empty()) {
        PipelineConfig file_cfg = parse_config(read_text_file(u_config));
        base = fs::path(u_config).parent_path();
        // Flags given on the command line win over the file.
        auto given = [&](const char* name) { return run->count(name) > 0; };
        if (given("--unit")) file_cfg.unit = cfg.unit;
        if (given("--sites")) file_cfg.sites = cfg.sites;
        if (given("--landcover")) file_cfg.landcover = cfg.landcover;
        if (given("--roads")) file_cfg.roads = cfg.roads;
        if (given("--crossings")) file_cfg.crossings = cfg.crossings;
        if (given("--mask")) file_cfg.landscape_mask = cfg.landscape_mask;
        if (given("--friction-table")) file_cfg.friction_table = cfg.friction_table;
        if (given("--out")) file_cfg.output_dir = cfg.output_dir;
        if (given("--connectivity")) file_cfg.connectivity = cfg.connectivity;
        if (given("--edge-width")) file_cfg.edge_width = cfg.edge_width;
        if (given("--dist50")) file_cfg.dist50 = cfg.dist50;
        if (given("--p-iso")) file_cfg.p_iso = cfg.p_iso;
        if (given("--opaque-subnets")) file_cfg.opaque_subnets = cfg.opaque_subnets;
        if (given("--threads")) file_cfg.threads = cfg.threads;
        cfg = file_cfg;
      }
      if (u_cellsize > 0) cfg.cellsize = u_cellsize;
      cfg.validate();
      if (!u_dump.empty()) {
        write_text_file(u_dump, format_config(cfg));
        return kOk;
      }
      auto res = run_pipeline(cfg, base, note);
      std::cout << format_report_csv(res.report);
    }
  } catch (const ConfigError& e) {
    note(std::string("config error: ") + e.what());
    return kConfigError;
  } catch (const InvariantError& e) {
    note(std::string("invariant failure: ") + e.what());
    return kInvariantError;
  } catch (const DataError& e) {
    note(std::string("input error: ") + e.what());
    return kDataError;
  } catch (const std::exception& e) {
    note(std::string("internal error: ") + e.what());
    return kInvariantError;
  }
  return kOk;
}
