// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "landconn/format.hpp"
#include "landconn/grid.hpp"
#include "landconn/rasterize.hpp"

namespace landconn {

struct Subnet {
  int id = 0;
  std::size_t cell_count = 0;
  double area_m2 = 0.0;
  std::vector<int> member_site_ids;  // ascending
  friend bool operator==(const Subnet&, const Subnet&) = default;
};

/// Subnet ids run 1..n in order of each subnet's first cell in a row-major
/// scan; label 0 is background and nodata is carried through.
struct SubnetLabeling {
  CategoricalGrid labels;
  std::vector<Subnet> subnets;

  std::size_t size() const { return subnets.size(); }

  std::vector<double> areas() const {
    std::vector<double> a;
    a.reserve(subnets.size());
    for (const auto& s : subnets) a.push_back(s.area_m2);
    return a;
  }
};

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n = 0) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root survives, keeping first-seen order stable.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

namespace detail {

inline bool is_site_cell(const CategoricalGrid& g, std::size_t idx) {
  return !g.is_nodata(idx) && g[idx] != 0;
}

}  // namespace detail

/// Components of all site cells in `sites` (any nonzero, non-nodata code).
/// Overlap entries contribute their extra site ids to the membership of
/// the subnet holding that cell.
inline SubnetLabeling label_subnets(const CategoricalGrid& sites,
                                    std::span<const OverlapEntry> overlaps = {},
                                    Connectivity conn = Connectivity::Eight) {
  const int R = sites.rows(), C = sites.cols();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!sites.is_nodata(i) && sites[i] < 0) {
      throw DataError("site grid holds negative code " +
                      std::to_string(sites[i]));
    }
  }

  // Pass 1: provisional labels from already-scanned neighbours.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> prov(sites.size(), kNone);
  DisjointSet ds;
  static constexpr std::pair<int, int> kPrev8[4] = {
      {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
  static constexpr std::pair<int, int> kPrev4[2] = {{0, -1}, {-1, 0}};
  std::span<const std::pair<int, int>> prev =
      conn == Connectivity::Eight ? std::span<const std::pair<int, int>>(kPrev8)
                                  : std::span<const std::pair<int, int>>(kPrev4);
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      auto idx = sites.index(r, c);
      if (!detail::is_site_cell(sites, idx)) continue;
      std::size_t label = kNone;
      for (auto [dr, dc] : prev) {
        int nr = r + dr, nc = c + dc;
        if (!sites.contains(nr, nc)) continue;
        auto nl = prov[sites.index(nr, nc)];
        if (nl == kNone) continue;
        if (label == kNone) {
          label = nl;
        } else {
          ds.unite(label, nl);
        }
      }
      prov[idx] = label == kNone ? ds.add() : label;
    }
  }

  // Pass 2: contiguous ids by first-scanned cell.
  SubnetLabeling out;
  out.labels = CategoricalGrid(sites.header(), 0);
  std::vector<int> root_to_id;
  std::vector<std::set<int>> members;
  const double cell_area = sites.header().cell_area();
  for (std::size_t idx = 0; idx < sites.size(); ++idx) {
    if (sites.is_nodata(idx)) {
      out.labels.set_nodata(idx);
      continue;
    }
    if (prov[idx] == kNone) continue;
    auto root = ds.find(prov[idx]);
    if (root >= root_to_id.size()) root_to_id.resize(root + 1, 0);
    if (root_to_id[root] == 0) {
      root_to_id[root] = static_cast<int>(out.subnets.size()) + 1;
      out.subnets.push_back({root_to_id[root], 0, 0.0, {}});
      members.emplace_back();
    }
    int id = root_to_id[root];
    out.labels.set(idx, id);
    auto& s = out.subnets[id - 1];
    ++s.cell_count;
    members[id - 1].insert(sites[idx]);
  }
  for (const auto& e : overlaps) {
    if (!sites.contains(e.cell.row, e.cell.col)) {
      throw DataError("overlap entry outside grid at row " +
                      std::to_string(e.cell.row) + ", col " +
                      std::to_string(e.cell.col));
    }
    int id = out.labels.is_nodata(e.cell.row, e.cell.col)
                 ? 0
                 : out.labels.at(e.cell.row, e.cell.col);
    if (id == 0) {
      throw DataError("overlap entry on a non-site cell at row " +
                      std::to_string(e.cell.row) + ", col " +
                      std::to_string(e.cell.col));
    }
    members[id - 1].insert(e.site_ids.begin(), e.site_ids.end());
  }
  for (std::size_t i = 0; i < out.subnets.size(); ++i) {
    auto& s = out.subnets[i];
    s.area_m2 = static_cast<double>(s.cell_count) * cell_area;
    s.member_site_ids.assign(members[i].begin(), members[i].end());
  }
  return out;
}

/// Rebuilds the subnet table from a label grid alone. Site membership is
/// unknown in that case and left empty.
inline SubnetLabeling labeling_from_labels(const CategoricalGrid& labels) {
  SubnetLabeling out{labels, {}};
  int max_id = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels.is_nodata(i)) continue;
    if (labels[i] < 0) {
      throw DataError("label grid holds negative id " +
                      std::to_string(labels[i]));
    }
    max_id = std::max(max_id, labels[i]);
  }
  out.subnets.resize(max_id);
  for (int k = 0; k < max_id; ++k) out.subnets[k].id = k + 1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels.is_nodata(i) || labels[i] == 0) continue;
    ++out.subnets[labels[i] - 1].cell_count;
  }
  for (auto& s : out.subnets) {
    if (s.cell_count == 0) {
      throw DataError("label grid ids are not contiguous: subnet " +
                      std::to_string(s.id) + " has no cells");
    }
    s.area_m2 = static_cast<double>(s.cell_count) * labels.header().cell_area();
  }
  return out;
}

struct PatternStats {
  std::size_t n_sites = 0;
  std::size_t n_subnets = 0;
  std::optional<double> median_subnet_area;  // m2; absent without subnets
  double total_site_area = 0.0;              // m2
  double landscape_area = 0.0;               // A_L, m2
  double cover_fraction = 0.0;
};

inline std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  auto n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Landscape area is the count of non-nodata mask cells times the cell area.
inline PatternStats pattern_stats(const SubnetLabeling& labeling,
                                  const CategoricalGrid& landscape_mask) {
  require_aligned(labeling.labels, landscape_mask,
                  "subnet labels vs landscape mask");
  PatternStats st;
  std::set<int> sites;
  for (const auto& s : labeling.subnets) {
    sites.insert(s.member_site_ids.begin(), s.member_site_ids.end());
    st.total_site_area += s.area_m2;
  }
  st.n_sites = sites.size();
  st.n_subnets = labeling.subnets.size();
  st.median_subnet_area = median(labeling.areas());
  st.landscape_area = static_cast<double>(landscape_mask.valid_count()) *
                      landscape_mask.header().cell_area();
  if (!(st.landscape_area > 0.0)) {
    throw DomainError("landscape mask has no valid cells");
  }
  st.cover_fraction = st.total_site_area / st.landscape_area;
  return st;
}

/// Subnet table as CSV: `subnet_id,cell_count,area_m2,site_ids`.
inline std::string format_subnets_csv(const SubnetLabeling& labeling) {
  std::string out = "subnet_id,cell_count,area_m2,site_ids\n";
  for (const auto& s : labeling.subnets) {
    out += std::to_string(s.id) + "," + std::to_string(s.cell_count) + "," +
           format_number(s.area_m2) + "," + join_ids(s.member_site_ids) + "\n";
  }
  return out;
}

inline std::vector<Subnet> parse_subnets_csv(const std::string& text) {
  std::vector<Subnet> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    auto l = trim(line);
    if (l.empty()) continue;
    if (header) {
      if (l != "subnet_id,cell_count,area_m2,site_ids") {
        throw ParseError("subnet table: bad header '" + std::string(l) + "'",
                         "header");
      }
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      auto comma = l.find(',', start);
      if (comma == std::string_view::npos) {
        throw ParseError("subnet table: short row '" + std::string(l) + "'",
                         "row");
      }
      f.push_back(l.substr(start, comma - start));
      start = comma + 1;
    }
    f.push_back(l.substr(start));
    auto id = parse_integer(f[0]);
    auto count = parse_integer(f[1]);
    auto area = parse_double(f[2]);
    if (!id || !count || !area) {
      throw ParseError("subnet table: bad row '" + std::string(l) + "'",
                       "row");
    }
    out.push_back({static_cast<int>(*id), static_cast<std::size_t>(*count),
                   *area, split_ids(f[3])});
  }
  return out;
}

}  // namespace landconn
