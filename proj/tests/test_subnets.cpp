// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "landconn/subnets.hpp"
#include "oracles.hpp"

namespace landconn {
namespace {

using fixtures::header;

CategoricalGrid grid_from(const std::vector<std::vector<int>>& rows) {
  CategoricalGrid g(header(static_cast<int>(rows[0].size()),
                           static_cast<int>(rows.size())));
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) g.set(r, c, rows[r][c]);
  return g;
}

std::vector<int> labels_of(const SubnetLabeling& l) {
  return {l.labels.values().begin(), l.labels.values().end()};
}

TEST(Subnets, SingleContiguousSite) {
  auto g = grid_from({{0, 4, 4}, {0, 4, 0}, {0, 4, 4}});
  auto l = label_subnets(g);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l.subnets[0].cell_count, 5u);
  EXPECT_DOUBLE_EQ(l.subnets[0].area_m2, 5 * 1e4);
  EXPECT_EQ(l.subnets[0].member_site_ids, (std::vector<int>{4}));
}

TEST(Subnets, DiagonalTouchMergesUnderEightConnectivity) {
  auto g = grid_from({{1, 0}, {0, 2}});
  EXPECT_EQ(label_subnets(g, {}, Connectivity::Eight).size(), 1u);
  EXPECT_EQ(label_subnets(g, {}, Connectivity::Four).size(), 2u);
  // Cross-check with the flood-fill oracle.
  std::vector<int> set = {1, 0, 0, 1};
  auto ref = oracle::flood_fill(set, 2, 2, true);
  EXPECT_TRUE(oracle::same_partition(labels_of(label_subnets(g)), ref));
}

TEST(Subnets, IdsFollowRowMajorFirstCell) {
  auto g = grid_from({{0, 0, 0, 5}, {9, 0, 0, 0}, {0, 0, 3, 3}});
  auto l = label_subnets(g);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l.labels.at(0, 3), 1);
  EXPECT_EQ(l.labels.at(1, 0), 2);
  EXPECT_EQ(l.labels.at(2, 2), 3);
}

TEST(Subnets, UShapeMergesLateInScan) {
  // Two arms meet only at the bottom row.
  auto g = grid_from({{1, 0, 2}, {1, 0, 2}, {1, 1, 1}});
  auto l = label_subnets(g, {}, Connectivity::Four);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l.subnets[0].member_site_ids, (std::vector<int>{1, 2}));
}

TEST(Subnets, OverlapContributesMembership) {
  auto g = grid_from({{1, 1, 0}});
  std::vector<OverlapEntry> ov = {{{0, 1}, {1, 6}}};
  auto l = label_subnets(g, ov);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l.subnets[0].member_site_ids, (std::vector<int>{1, 6}));
  std::vector<OverlapEntry> bad = {{{0, 2}, {1, 6}}};
  EXPECT_THROW(label_subnets(g, bad), DataError);
}

TEST(Subnets, NodataCarriedThrough) {
  auto g = grid_from({{1, 0}, {0, 1}});
  g.set_nodata(0, 1);
  auto l = label_subnets(g);
  EXPECT_TRUE(l.labels.is_nodata(0, 1));
  EXPECT_EQ(l.size(), 1u);
}

TEST(Subnets, LabelGridRebuildsTable) {
  auto g = grid_from({{1, 0, 1}, {0, 0, 1}});
  auto l = label_subnets(g, {}, Connectivity::Four);
  auto back = labeling_from_labels(l.labels);
  ASSERT_EQ(back.size(), l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    EXPECT_EQ(back.subnets[i].cell_count, l.subnets[i].cell_count);
  }
  EXPECT_THROW(labeling_from_labels(grid_from({{2, 0}})), DataError);
}

TEST(PatternStats, MedianAndCoverFromHandArithmetic) {
  // 1 km cells: areas 1, 2, 9 km2 in a 10x10 km unit.
  GridHeader h = header(10, 10, 1000.0);
  CategoricalGrid sites(h, 0);
  sites.set(0, 0, 1);
  sites.set(0, 5, 2);
  sites.set(0, 6, 2);
  for (int r = 5; r < 8; ++r)
    for (int c = 5; c < 8; ++c) sites.set(r, c, 3);
  auto l = label_subnets(sites);
  CategoricalGrid mask(h, 1);
  auto st = pattern_stats(l, mask);
  EXPECT_EQ(st.n_subnets, 3u);
  EXPECT_EQ(st.n_sites, 3u);
  ASSERT_TRUE(st.median_subnet_area);
  EXPECT_DOUBLE_EQ(*st.median_subnet_area, 2e6);
  EXPECT_DOUBLE_EQ(st.landscape_area, 100e6);
  EXPECT_DOUBLE_EQ(st.cover_fraction, 0.12);
}

TEST(PatternStats, FullCoverAndEmpty) {
  GridHeader h = header(3, 2);
  CategoricalGrid all(h, 1);
  auto st = pattern_stats(label_subnets(all), all);
  EXPECT_EQ(st.cover_fraction, 1.0);

  CategoricalGrid none(h, 0);
  auto empty = pattern_stats(label_subnets(none), all);
  EXPECT_EQ(empty.n_subnets, 0u);
  EXPECT_EQ(empty.cover_fraction, 0.0);
  EXPECT_FALSE(empty.median_subnet_area);
}

TEST(PatternStats, EvenCountMedianAveragesMiddlePair) {
  EXPECT_EQ(*median({4, 1, 3, 2}), 2.5);
  EXPECT_FALSE(median({}));
}

TEST(PatternStats, LandscapeExcludesNodataAndNeedsValidCells) {
  GridHeader h = header(2, 2);
  CategoricalGrid mask(h, 1);
  mask.set_nodata(0, 0);
  CategoricalGrid sites(h, 0);
  sites.set(1, 1, 1);
  auto st = pattern_stats(label_subnets(sites), mask);
  EXPECT_DOUBLE_EQ(st.landscape_area, 3e4);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.set_nodata(i);
  EXPECT_THROW(pattern_stats(label_subnets(sites), mask), DomainError);
}

TEST(Subnets, CsvRoundTrip) {
  auto g = grid_from({{1, 0, 2}, {1, 0, 0}});
  auto l = label_subnets(g);
  auto csv = format_subnets_csv(l);
  EXPECT_EQ(csv, "subnet_id,cell_count,area_m2,site_ids\n1,2,20000,1\n2,1,10000,2\n");
  auto rows = parse_subnets_csv(csv);
  EXPECT_EQ(rows, l.subnets);
}

// Partition equality with recursive flood fill, both connectivities.
TEST(SubnetsProperty, MatchesFloodFill) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 400; ++trial) {
    auto m = fixtures::random_mask(rng, 16);
    CategoricalGrid g(header(m.cols, m.rows), 0);
    std::vector<int> set(m.bits.begin(), m.bits.end());
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i]) g.set(i, 1 + static_cast<int>(rng() % 7));
    }
    for (bool eight : {true, false}) {
      auto l = label_subnets(g, {}, eight ? Connectivity::Eight : Connectivity::Four);
      auto ref = oracle::flood_fill(set, m.rows, m.cols, eight);
      EXPECT_TRUE(oracle::same_partition(labels_of(l), ref));
      int max_ref = *std::max_element(ref.begin(), ref.end());
      EXPECT_EQ(l.size(), static_cast<std::size_t>(max_ref));
    }
  }
}

// Relabelling sites leaves the partition unchanged.
TEST(SubnetsProperty, PermutationInvariant) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = fixtures::random_mask(rng, 12);
    CategoricalGrid g(header(m.cols, m.rows), 0);
    for (std::size_t i = 0; i < m.bits.size(); ++i)
      if (m.bits[i]) g.set(i, 1 + static_cast<int>(rng() % 5));
    std::vector<int> perm = {0, 1, 2, 3, 4, 5};
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    CategoricalGrid h = g;
    for (std::size_t i = 0; i < g.size(); ++i) h.set(i, perm[g[i]]);
    auto a = label_subnets(g), b = label_subnets(h);
    EXPECT_EQ(labels_of(a), labels_of(b));
  }
}

// Adding one site cell adds at most one subnet.
TEST(SubnetsProperty, AddingCellAddsAtMostOneSubnet) {
  std::mt19937 rng(4321);
  for (int trial = 0; trial < 300; ++trial) {
    auto m = fixtures::random_mask(rng, 10);
    CategoricalGrid g(header(m.cols, m.rows), 0);
    for (std::size_t i = 0; i < m.bits.size(); ++i)
      if (m.bits[i]) g.set(i, 1);
    auto before = label_subnets(g).size();
    g.set(rng() % g.size(), 1);
    auto after = label_subnets(g).size();
    EXPECT_LE(after, before + 1);
  }
}

}  // namespace
}  // namespace landconn
