// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "landconn/rasterize.hpp"
#include "landconn/subnets.hpp"
#include "oracles.hpp"

namespace landconn {
namespace {

using fixtures::header;
using fixtures::rect_site;

TEST(Rasterize, SquareCoveringTwoByTwoCenters) {
  // 4x4 grid of 100 m cells; the square spans columns 1-2, rows 1-2.
  auto r = rasterize_sites({rect_site(7, 100, 100, 300, 300)}, header(4, 4));
  int burned = 0;
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      bool inside = row >= 1 && row <= 2 && col >= 1 && col <= 2;
      EXPECT_EQ(r.grid.at(row, col), inside ? 7 : 0) << row << "," << col;
      burned += inside;
    }
  }
  EXPECT_EQ(burned, 4);
  EXPECT_TRUE(r.overlaps.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Rasterize, OverlapResolvesToLowerIdAndIsRecorded) {
  // Five cells in a row; site 3 covers centers 0-2, site 2 covers 2-4.
  SitePolygonSet sites = {rect_site(3, 0, 0, 300, 100),
                          rect_site(2, 200, 0, 500, 100)};
  auto r = rasterize_sites(sites, header(5, 1));
  EXPECT_EQ(r.grid.at(0, 0), 3);
  EXPECT_EQ(r.grid.at(0, 1), 3);
  EXPECT_EQ(r.grid.at(0, 2), 2);
  EXPECT_EQ(r.grid.at(0, 3), 2);
  EXPECT_EQ(r.grid.at(0, 4), 2);
  ASSERT_EQ(r.overlaps.size(), 1u);
  EXPECT_EQ(r.overlaps[0].cell, (Cell{0, 2}));
  EXPECT_EQ(r.overlaps[0].site_ids, (std::vector<int>{2, 3}));
}

TEST(Rasterize, FiveSiteLayoutGivesThreeSubnets) {
  auto r = rasterize_sites(fixtures::five_site_layout(),
                           fixtures::five_site_header());
  EXPECT_FALSE(r.overlaps.empty());
  auto l = label_subnets(r.grid, r.overlaps);
  ASSERT_EQ(l.size(), 3u);
  // Ids follow the first cell in a top-down scan.
  EXPECT_EQ(l.subnets[0].member_site_ids, (std::vector<int>{5}));
  EXPECT_EQ(l.subnets[1].member_site_ids, (std::vector<int>{3, 4}));
  EXPECT_EQ(l.subnets[2].member_site_ids, (std::vector<int>{1, 2}));
}

TEST(Rasterize, EdgeTieRuleIsHalfOpen) {
  // Cell centers at x = 50, 150, 250; the square's left edge passes
  // through center 150 and its right edge through center 250.
  auto r = rasterize_sites({rect_site(1, 150, 0, 250, 100)}, header(3, 1));
  EXPECT_EQ(r.grid.at(0, 0), 0);
  EXPECT_EQ(r.grid.at(0, 1), 1);  // left edge: inside
  EXPECT_EQ(r.grid.at(0, 2), 0);  // right edge: outside
  // Bottom edge through centers y = 50: inside; top edge: outside.
  auto v = rasterize_sites({rect_site(1, 0, 50, 100, 150)}, header(1, 3));
  EXPECT_EQ(v.grid.at(2, 0), 1);
  EXPECT_EQ(v.grid.at(1, 0), 0);
  EXPECT_EQ(v.grid.at(0, 0), 0);
}

TEST(Rasterize, HolesUseEvenOddRule) {
  SitePolygon s{1,
                {rectangle_ring(0, 0, 500, 500), rectangle_ring(200, 200, 300, 300)}};
  auto r = rasterize_sites({s}, header(5, 5));
  EXPECT_EQ(r.grid.at(2, 2), 0);
  EXPECT_EQ(r.grid.at(2, 1), 1);
  EXPECT_EQ(r.grid.at(0, 0), 1);
}

TEST(Rasterize, PolygonOutsideGridWarns) {
  auto r = rasterize_sites({rect_site(1, 5000, 5000, 6000, 6000)}, header(3, 3));
  EXPECT_EQ(r.grid.valid_count(), 9u);
  for (std::size_t i = 0; i < r.grid.size(); ++i) EXPECT_EQ(r.grid[i], 0);
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(Rasterize, GeometryErrors) {
  auto h = header(3, 3);
  EXPECT_THROW(rasterize_sites({{1, {{{0, 0}, {100, 0}, {0, 0}}}}}, h),
               GeometryError);
  EXPECT_THROW(rasterize_sites({{1, {{{0, 0}, {100, 0}, {100, 100}}}}}, h),
               GeometryError);  // not closed
  EXPECT_THROW(rasterize_sites({rect_site(1, 0, 0, 1, 1), rect_site(1, 0, 0, 2, 2)}, h),
               GeometryError);
  EXPECT_THROW(rasterize_sites({rect_site(0, 0, 0, 1, 1)}, h), GeometryError);
}

TEST(Rasterize, SitesJsonRoundTrip) {
  auto sites = fixtures::five_site_layout();
  auto back = parse_sites_json(format_sites_json(sites));
  ASSERT_EQ(back.size(), sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    EXPECT_EQ(back[i].site_id, sites[i].site_id);
    EXPECT_EQ(back[i].rings, sites[i].rings);
  }
  EXPECT_THROW(parse_sites_json("{\"id\": 1}"), ParseError);
  EXPECT_THROW(parse_sites_json("[{\"id\": 1.5, \"rings\": []}]"), ParseError);
  EXPECT_THROW(parse_sites_json("[{\"id\": 1, \"rings\": [[[0,0],[1,0]]]}]"),
               GeometryError);
}

TEST(Rasterize, OverlapCsvRoundTrip) {
  std::vector<OverlapEntry> ov = {{{0, 2}, {2, 3}}, {{4, 1}, {1, 5, 9}}};
  EXPECT_EQ(parse_overlaps_csv(format_overlaps_csv(ov)), ov);
  EXPECT_EQ(format_overlaps_csv(ov), "row,col,site_ids\n0,2,2;3\n4,1,1;5;9\n");
}

// Random star-shaped polygons against a winding-number oracle at random
// points (never exactly on an edge).
TEST(RasterizeProperty, MatchesWindingNumberOracle) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + trial % 9;
    double cx = 500 + u(rng) * 100, cy = 500 + u(rng) * 100;
    Ring ring;
    std::vector<std::pair<double, double>> oring;
    for (int k = 0; k < n; ++k) {
      double ang = 2 * M_PI * (k + 0.8 * u(rng)) / n;
      double rad = 100 + 350 * u(rng);
      ring.push_back({cx + rad * std::cos(ang), cy + rad * std::sin(ang)});
    }
    ring.push_back(ring.front());
    for (auto p : ring) oring.push_back({p.x, p.y});
    for (int q = 0; q < 50; ++q) {
      double px = u(rng) * 1100, py = u(rng) * 1100;
      bool expect = oracle::winding_number(oring, px, py) != 0;
      EXPECT_EQ(point_in_rings({ring}, px, py), expect);
    }
    GridHeader h = header(11, 11);
    h.xllcorner = 0.37;  // keep centers off polygon vertices
    auto r = rasterize_sites({{1, {ring}}}, h);
    for (int row = 0; row < 11; ++row) {
      for (int col = 0; col < 11; ++col) {
        bool expect =
            oracle::winding_number(oring, h.center_x(col), h.center_y(row)) != 0;
        EXPECT_EQ(r.grid.at(row, col) == 1, expect);
      }
    }
  }
}

// Shifting polygons and origin by the same vector leaves the codes alone.
TEST(RasterizeProperty, TranslationEquivariant) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coord(0, 16);
  std::uniform_int_distribution<int> shift(-1000, 1000);
  for (int trial = 0; trial < 100; ++trial) {
    SitePolygonSet sites;
    for (int id = 1; id <= 3; ++id) {
      int x0 = coord(rng), y0 = coord(rng);
      Ring ring = {{x0 * 50.0, y0 * 50.0},
                   {(x0 + 1 + coord(rng)) * 50.0, y0 * 50.0},
                   {x0 * 50.0, (y0 + 1 + coord(rng)) * 50.0},
                   {x0 * 50.0, y0 * 50.0}};
      sites.push_back({id, {ring}});
    }
    GridHeader h = header(10, 10);
    auto base = rasterize_sites(sites, h);
    double dx = shift(rng) * 25.0, dy = shift(rng) * 25.0;
    for (auto& s : sites)
      for (auto& r : s.rings)
        for (auto& p : r) {
          p.x += dx;
          p.y += dy;
        }
    h.xllcorner += dx;
    h.yllcorner += dy;
    auto moved = rasterize_sites(sites, h);
    EXPECT_EQ(base.grid.values().size(), moved.grid.values().size());
    EXPECT_TRUE(std::equal(base.grid.values().begin(), base.grid.values().end(),
                           moved.grid.values().begin()));
    EXPECT_EQ(base.overlaps, moved.overlaps);
  }
}

}  // namespace
}  // namespace landconn
