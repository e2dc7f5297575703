// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// Binary morphology and the node/link structure of subnet footprints.
//
// Nodes are the connected components of the morphological opening of a
// footprint by the edge width. What the opening removes is split into
// components; a component that touches two or more distinct nodes, or one
// node at two or more separate places (a loop), is a link. Anything else
// (a dangling branch) is neither.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landconn/error.hpp"
#include "landconn/format.hpp"
#include "landconn/grid.hpp"
#include "landconn/subnets.hpp"

namespace landconn {

struct BinaryMask {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int r, int c, bool fill = false)
      : rows(r), cols(c), bits(static_cast<std::size_t>(r) * c, fill ? 1 : 0) {}

  bool contains(int r, int c) const {
    return r >= 0 && c >= 0 && r < rows && c < cols;
  }
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols + c;
  }
  bool at(int r, int c) const { return bits[index(r, c)] != 0; }
  // Out-of-grid cells read as unset.
  bool get(int r, int c) const { return contains(r, c) && at(r, c); }
  void set(int r, int c, bool v = true) { bits[index(r, c)] = v ? 1 : 0; }
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
  }
  bool empty() const { return count() == 0; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

inline BinaryMask complement(const BinaryMask& m) {
  BinaryMask out = m;
  for (auto& b : out.bits) b = b ? 0 : 1;
  return out;
}

inline bool is_subset(const BinaryMask& a, const BinaryMask& b) {
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    if (a.bits[i] && !b.bits[i]) return false;
  }
  return true;
}

namespace detail {

inline BinaryMask unit_step(const BinaryMask& m, Connectivity conn,
                            bool erode) {
  BinaryMask out(m.rows, m.cols);
  const auto offs = neighbor_offsets(conn);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      bool v = m.at(r, c);
      for (auto [dr, dc] : offs) {
        bool n = m.get(r + dr, c + dc);
        v = erode ? (v && n) : (v || n);
      }
      out.set(r, c, v);
    }
  }
  return out;
}

}  // namespace detail

/// Cell stays set iff every cell within the structuring distance (Chebyshev
/// for 8-connectivity, Manhattan for 4) is set. Cells beyond the grid edge
/// count as unset. The radius-r element is the r-fold Minkowski sum of the
/// unit element, so r unit erosions give the same result.
inline BinaryMask erode(const BinaryMask& m, int radius,
                        Connectivity conn = Connectivity::Eight) {
  if (radius < 1) throw DomainError("erosion radius must be >= 1");
  BinaryMask out = m;
  for (int i = 0; i < radius && !out.empty(); ++i) {
    out = detail::unit_step(out, conn, true);
  }
  return out;
}

inline BinaryMask dilate(const BinaryMask& m, int radius,
                         Connectivity conn = Connectivity::Eight) {
  if (radius < 1) throw DomainError("dilation radius must be >= 1");
  BinaryMask out = m;
  for (int i = 0; i < radius; ++i) out = detail::unit_step(out, conn, false);
  return out;
}

inline BinaryMask opening(const BinaryMask& m, int radius,
                          Connectivity conn = Connectivity::Eight) {
  return dilate(erode(m, radius, conn), radius, conn);
}

/// Component labels (0 = unset, 1..n in row-major first-cell order).
struct Components {
  std::vector<int> labels;
  int count = 0;
};

inline Components label_components(const BinaryMask& m, Connectivity conn) {
  Components out{std::vector<int>(m.bits.size(), 0), 0};
  const auto offs = neighbor_offsets(conn);
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (!m.at(r, c) || out.labels[m.index(r, c)]) continue;
      int id = ++out.count;
      out.labels[m.index(r, c)] = id;
      stack.push_back({r, c});
      while (!stack.empty()) {
        auto [cr, cc] = stack.back();
        stack.pop_back();
        for (auto [dr, dc] : offs) {
          int nr = cr + dr, nc = cc + dc;
          if (!m.get(nr, nc) || out.labels[m.index(nr, nc)]) continue;
          out.labels[m.index(nr, nc)] = id;
          stack.push_back({nr, nc});
        }
      }
    }
  }
  return out;
}

struct MorphologyParams {
  int edge_width = 1;
  Connectivity connectivity = Connectivity::Eight;

  void validate() const {
    if (edge_width < 1) throw DomainError("edge_width must be >= 1");
  }
};

enum class SubnetClass { Simple, Complex };

inline const char* to_string(SubnetClass c) {
  return c == SubnetClass::Simple ? "SIMPLE" : "COMPLEX";
}

struct SubnetStructure {
  int subnet_id = 0;
  int n_nodes = 0;
  int n_links = 0;
  SubnetClass cls = SubnetClass::Simple;
  friend bool operator==(const SubnetStructure&,
                         const SubnetStructure&) = default;
};

/// Node/link analysis of one connected footprint. A footprint with fewer
/// than two nodes (including one too thin to hold any) is SIMPLE.
inline SubnetStructure classify_subnet(const BinaryMask& footprint,
                                       const MorphologyParams& params,
                                       int subnet_id = 0) {
  params.validate();
  if (footprint.empty()) {
    throw DataError("classify_subnet: empty footprint for subnet " +
                    std::to_string(subnet_id));
  }
  const auto conn = params.connectivity;
  const auto offs = neighbor_offsets(conn);

  BinaryMask core = opening(footprint, params.edge_width, conn);
  Components nodes = label_components(core, conn);

  BinaryMask rest(footprint.rows, footprint.cols);
  for (std::size_t i = 0; i < rest.bits.size(); ++i) {
    rest.bits[i] = footprint.bits[i] && !core.bits[i];
  }
  Components pieces = label_components(rest, conn);

  // contact[piece][node] = cells of the piece that touch the node.
  std::vector<std::map<int, std::vector<std::pair<int, int>>>> contact(
      pieces.count + 1);
  for (int r = 0; r < rest.rows; ++r) {
    for (int c = 0; c < rest.cols; ++c) {
      int p = pieces.labels[rest.index(r, c)];
      if (!p) continue;
      std::set<int> touched;
      for (auto [dr, dc] : offs) {
        int nr = r + dr, nc = c + dc;
        if (!core.get(nr, nc)) continue;
        touched.insert(nodes.labels[core.index(nr, nc)]);
      }
      for (int n : touched) contact[p][n].push_back({r, c});
    }
  }

  int links = 0;
  for (int p = 1; p <= pieces.count; ++p) {
    const auto& by_node = contact[p];
    if (by_node.size() >= 2) {
      ++links;
      continue;
    }
    if (by_node.size() == 1) {
      // Loop test: the contact cells fall into separate groups.
      BinaryMask touch(rest.rows, rest.cols);
      for (auto [r, c] : by_node.begin()->second) touch.set(r, c);
      if (label_components(touch, conn).count >= 2) ++links;
    }
  }

  SubnetStructure s;
  s.subnet_id = subnet_id;
  s.n_nodes = nodes.count;
  s.n_links = links;
  s.cls = nodes.count >= 2 ? SubnetClass::Complex : SubnetClass::Simple;
  return s;
}

/// Classifies every subnet of a labeling, in subnet id order. Each
/// footprint is cropped to its bounding box; cells outside the footprint
/// are unset either way, so the crop does not change the result.
inline std::vector<SubnetStructure> classify_subnets(
    const SubnetLabeling& labeling, const MorphologyParams& params) {
  const auto& g = labeling.labels;
  const std::size_t n = labeling.subnets.size();
  struct Box {
    int r0 = INT32_MAX, c0 = INT32_MAX, r1 = -1, c1 = -1;
  };
  std::vector<Box> boxes(n);
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (g.is_nodata(r, c)) continue;
      int id = g.at(r, c);
      if (id <= 0) continue;
      if (static_cast<std::size_t>(id) > n) {
        throw DataError("label " + std::to_string(id) +
                        " not in subnet table");
      }
      auto& b = boxes[id - 1];
      b.r0 = std::min(b.r0, r);
      b.r1 = std::max(b.r1, r);
      b.c0 = std::min(b.c0, c);
      b.c1 = std::max(b.c1, c);
    }
  }
  std::vector<SubnetStructure> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int id = static_cast<int>(k) + 1;
    const auto& b = boxes[k];
    if (b.r1 < 0) {
      throw DataError("subnet " + std::to_string(id) + " has no cells");
    }
    BinaryMask fp(b.r1 - b.r0 + 1, b.c1 - b.c0 + 1);
    for (int r = b.r0; r <= b.r1; ++r) {
      for (int c = b.c0; c <= b.c1; ++c) {
        if (!g.is_nodata(r, c) && g.at(r, c) == id) fp.set(r - b.r0, c - b.c0);
      }
    }
    out.push_back(classify_subnet(fp, params, id));
  }
  return out;
}

struct StructuralShares {
  double share_complex = 0.0;
  double share_simple = 0.0;
};

inline StructuralShares structural_shares(
    const std::vector<SubnetStructure>& structures) {
  if (structures.empty()) {
    throw DomainError("structural shares undefined without subnets");
  }
  std::size_t complex = 0;
  for (const auto& s : structures) complex += s.cls == SubnetClass::Complex;
  StructuralShares out;
  out.share_complex = static_cast<double>(complex) / structures.size();
  out.share_simple =
      static_cast<double>(structures.size() - complex) / structures.size();
  return out;
}

/// Structure table as CSV: `subnet_id,n_nodes,n_links,class`.
inline std::string format_structure_csv(
    const std::vector<SubnetStructure>& structures) {
  std::string out = "subnet_id,n_nodes,n_links,class\n";
  for (const auto& s : structures) {
    out += std::to_string(s.subnet_id) + "," + std::to_string(s.n_nodes) +
           "," + std::to_string(s.n_links) + "," + to_string(s.cls) + "\n";
  }
  return out;
}

inline std::vector<SubnetStructure> parse_structure_csv(
    const std::string& text) {
  std::vector<SubnetStructure> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    auto l = trim(line);
    if (l.empty()) continue;
    if (header) {
      if (l != "subnet_id,n_nodes,n_links,class") {
        throw ParseError("structure table: bad header '" + std::string(l) +
                             "'",
                         "header");
      }
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      auto comma = l.find(',', start);
      f.push_back(l.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 4) {
      throw ParseError("structure table: bad row '" + std::string(l) + "'",
                       "row");
    }
    auto id = parse_integer(f[0]);
    auto nn = parse_integer(f[1]);
    auto nl = parse_integer(f[2]);
    if (!id || !nn || !nl || (f[3] != "SIMPLE" && f[3] != "COMPLEX")) {
      throw ParseError("structure table: bad row '" + std::string(l) + "'",
                       "row");
    }
    out.push_back({static_cast<int>(*id), static_cast<int>(*nn),
                   static_cast<int>(*nl),
                   f[3] == "SIMPLE" ? SubnetClass::Simple
                                    : SubnetClass::Complex});
  }
  return out;
}

}  // namespace landconn
