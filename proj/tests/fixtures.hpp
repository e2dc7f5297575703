// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic scenes shared by the unit and acceptance suites.

#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "landconn/ascii_grid.hpp"
#include "landconn/costdist.hpp"
#include "landconn/friction.hpp"
#include "landconn/morphology.hpp"
#include "landconn/pipeline.hpp"
#include "landconn/sites.hpp"
#include "landconn/subnets.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace landconn;

inline GridHeader header(int cols, int rows, double cs = 100.0) {
  GridHeader h;
  h.ncols = cols;
  h.nrows = rows;
  h.cellsize = cs;
  return h;
}

inline SitePolygon rect_site(int id, double x0, double y0, double x1,
                             double y1) {
  return {id, {rectangle_ring(x0, y0, x1, y1)}};
}

/// Five sites: two overlapping pairs and one isolated site on a 20x12 grid
/// of 100 m cells; the expected result is three subnets.
inline SitePolygonSet five_site_layout() {
  return {
      rect_site(1, 100, 100, 600, 600),
      rect_site(2, 500, 300, 900, 800),
      rect_site(3, 1100, 100, 1500, 500),
      rect_site(4, 1400, 400, 1800, 900),
      rect_site(5, 300, 950, 700, 1150),
  };
}
inline GridHeader five_site_header() { return header(20, 12); }

/// Two 5x5 blobs joined by a one-cell-wide bridge six cells long.
inline BinaryMask dumbbell() {
  BinaryMask m(5, 16);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      m.set(r, c);
      m.set(r, c + 11);
    }
  }
  for (int c = 5; c <= 10; ++c) m.set(2, c);
  return m;
}

inline BinaryMask from_rows(const std::vector<std::string>& rows) {
  BinaryMask m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.set(r, c, rows[r][c] == '#');
  return m;
}

inline oracle::Field to_field(const NumericGrid& g) {
  oracle::Field f{g.rows(), g.cols(), g.header().cellsize, {}};
  for (std::size_t i = 0; i < g.size(); ++i) {
    f.v.push_back(g.is_nodata(i) ? std::nan("") : g[i]);
  }
  return f;
}

inline BinaryMask random_mask(std::mt19937& rng, int max_side,
                              double density = -1.0) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double d = density < 0 ? u(rng) : density;
  BinaryMask m(side(rng), side(rng));
  for (auto& b : m.bits) b = u(rng) < d;
  return m;
}

/// Road-wall scene on 8x8 cells: subnet 1 fills column 0, subnet 2 column
/// 7, a road runs down column 4 and (optionally) one crossing sits at row 6.
struct RoadWallScene {
  SubnetLabeling labeling;
  NumericGrid friction;
  Cell crossing{6, 4};
};

inline RoadWallScene road_wall(bool with_crossing) {
  GridHeader h = header(8, 8);
  CategoricalGrid labels(h, 0);
  CategoricalGrid landcover(h, 311);
  CategoricalGrid roads(h, 0);
  CategoricalGrid crossings(h, 0);
  for (int r = 0; r < 8; ++r) {
    labels.set(r, 0, 1);
    labels.set(r, 7, 2);
    roads.set(r, 4, 1);
  }
  if (with_crossing) crossings.set(6, 4, 1);
  RoadWallScene s;
  s.labeling = label_subnets(labels);
  s.friction = build_friction(landcover, &roads, &crossings, &s.labeling,
                              default_friction_table());
  return s;
}

/// Input files for a small end-to-end run: the five-site layout over mixed
/// land cover with a road and one crossing. Returns the config path.
inline std::filesystem::path write_scene(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  GridHeader h = five_site_header();
  CategoricalGrid lc(h, 311);
  CategoricalGrid roads(h, 0);
  CategoricalGrid cross(h, 0);
  for (int r = 0; r < h.nrows; ++r) {
    for (int c = 0; c < h.ncols; ++c) {
      if (c >= 14 && r < 4) lc.set(r, c, 211);
      if (r == 11 && c < 3) lc.set(r, c, 112);
    }
    roads.set(r, 10, 1);
  }
  cross.set(8, 10, 1);
  write_grid(lc, dir / "landcover.asc");
  write_grid(roads, dir / "roads.asc");
  write_grid(cross, dir / "crossings.asc");
  write_text_file(dir / "sites.json", format_sites_json(five_site_layout()));
  PipelineConfig cfg;
  cfg.unit = "synthetic";
  cfg.sites = "sites.json";
  cfg.landcover = "landcover.asc";
  cfg.roads = "roads.asc";
  cfg.crossings = "crossings.asc";
  cfg.output_dir = "out";
  write_text_file(dir / "config.json", format_config(cfg));
  return dir / "config.json";
}

/// Uniform friction-1 landscape of `cols` x `rows` with square sites of
/// `side` cells placed every `pitch` cells, at most `per_axis` per axis
/// (0 = as many as fit).
inline std::filesystem::path write_lattice_scene(
    const std::filesystem::path& dir, const std::string& unit, int cols,
    int rows, int side, int pitch, int per_axis = 0) {
  std::filesystem::create_directories(dir);
  GridHeader h = header(cols, rows);
  write_grid(CategoricalGrid(h, 311), dir / "landcover.asc");
  SitePolygonSet sites;
  int id = 1;
  const int lim = per_axis > 0 ? per_axis : std::max(rows, cols);
  for (int r = 1, i = 0; r + side <= rows - 1 && i < lim; r += pitch, ++i) {
    for (int c = 1, j = 0; c + side <= cols - 1 && j < lim; c += pitch, ++j) {
      double x0 = c * 100.0, x1 = (c + side) * 100.0;
      double y1 = (rows - r) * 100.0, y0 = (rows - r - side) * 100.0;
      sites.push_back(rect_site(id++, x0, y0, x1, y1));
    }
  }
  write_text_file(dir / "sites.json", format_sites_json(sites));
  PipelineConfig cfg;
  cfg.unit = unit;
  cfg.sites = "sites.json";
  cfg.landcover = "landcover.asc";
  cfg.output_dir = "out";
  write_text_file(dir / "config.json", format_config(cfg));
  return dir / "config.json";
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() /
           ("landconn_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixtures
