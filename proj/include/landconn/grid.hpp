// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "landconn/error.hpp"

namespace landconn {

inline constexpr double kDefaultCellSize = 100.0;
inline constexpr double kDefaultNodata = -9999.0;

/// Row/column address of a cell. Row 0 is the top (northernmost) row.
struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct GridHeader {
  int ncols = 1;
  int nrows = 1;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = kDefaultCellSize;
  double nodata_value = kDefaultNodata;

  friend bool operator==(const GridHeader&, const GridHeader&) = default;

  void validate() const {
    if (ncols < 1 || nrows < 1) {
      throw DataError("grid header: ncols and nrows must be >= 1, got " +
                      std::to_string(ncols) + "x" + std::to_string(nrows));
    }
    if (!(cellsize > 0.0) || !std::isfinite(cellsize)) {
      throw DataError("grid header: cellsize must be > 0");
    }
    if (!std::isfinite(xllcorner) || !std::isfinite(yllcorner)) {
      throw DataError("grid header: corner coordinates must be finite");
    }
  }

  // Same geometry; the nodata sentinel may differ.
  bool aligned_with(const GridHeader& o) const {
    return ncols == o.ncols && nrows == o.nrows && xllcorner == o.xllcorner &&
           yllcorner == o.yllcorner && cellsize == o.cellsize;
  }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows);
  }
  double cell_area() const { return cellsize * cellsize; }

  double center_x(int col) const { return xllcorner + (col + 0.5) * cellsize; }
  double center_y(int row) const {
    return yllcorner + (nrows - row - 0.5) * cellsize;
  }

  bool contains(int row, int col) const {
    return row >= 0 && col >= 0 && row < nrows && col < ncols;
  }
};

/// Rectangular raster with a per-cell nodata mask. Cells are row-major,
/// top row first, matching the on-disk order of ASCII grids.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(const GridHeader& header, T fill = T{})
      : header_(header), cells_(header.cell_count(), fill),
        nodata_(header.cell_count(), 0) {
    header_.validate();
  }

  const GridHeader& header() const { return header_; }
  int rows() const { return header_.nrows; }
  int cols() const { return header_.ncols; }
  std::size_t size() const { return cells_.size(); }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * header_.ncols + col;
  }
  Cell cell_of(std::size_t idx) const {
    return {static_cast<int>(idx / header_.ncols),
            static_cast<int>(idx % header_.ncols)};
  }
  bool contains(int row, int col) const { return header_.contains(row, col); }

  const T& at(int row, int col) const { return cells_[index(row, col)]; }
  T& at(int row, int col) { return cells_[index(row, col)]; }
  const T& operator[](std::size_t idx) const { return cells_[idx]; }
  T& operator[](std::size_t idx) { return cells_[idx]; }

  bool is_nodata(std::size_t idx) const { return nodata_[idx] != 0; }
  bool is_nodata(int row, int col) const { return is_nodata(index(row, col)); }

  void set(std::size_t idx, T value) {
    cells_[idx] = value;
    nodata_[idx] = 0;
  }
  void set(int row, int col, T value) { set(index(row, col), value); }
  void set_nodata(std::size_t idx) {
    cells_[idx] = T{};
    nodata_[idx] = 1;
  }
  void set_nodata(int row, int col) { set_nodata(index(row, col)); }

  void set_nodata_value(double v) { header_.nodata_value = v; }

  std::span<const T> values() const { return cells_; }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto m : nodata_) n += (m == 0);
    return n;
  }

  // Nodata cells compare equal regardless of the stored payload.
  friend bool operator==(const Grid& a, const Grid& b) {
    if (!(a.header_ == b.header_) || a.nodata_ != b.nodata_) return false;
    for (std::size_t i = 0; i < a.cells_.size(); ++i) {
      if (!a.nodata_[i] && !(a.cells_[i] == b.cells_[i])) return false;
    }
    return true;
  }

 private:
  GridHeader header_;
  std::vector<T> cells_;
  std::vector<std::uint8_t> nodata_;
};

using CategoricalGrid = Grid<std::int32_t>;
using NumericGrid = Grid<double>;

template <typename A, typename B>
void require_aligned(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.header().aligned_with(b.header())) {
    throw AlignmentError(std::string("grids not aligned: ") + what);
  }
}

/// 8-neighbourhood offsets in the fixed scan order N, NE, E, SE, S, SW, W, NW.
inline constexpr std::pair<int, int> kNeighbors8[8] = {
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}};

/// 4-neighbourhood offsets in the order N, E, S, W.
inline constexpr std::pair<int, int> kNeighbors4[4] = {
    {-1, 0}, {0, 1}, {1, 0}, {0, -1}};

enum class Connectivity { Four = 4, Eight = 8 };

inline Connectivity connectivity_from_int(int n) {
  if (n == 4) return Connectivity::Four;
  if (n == 8) return Connectivity::Eight;
  throw DomainError("connectivity must be 4 or 8, got " + std::to_string(n));
}

inline std::span<const std::pair<int, int>> neighbor_offsets(Connectivity c) {
  if (c == Connectivity::Four) return kNeighbors4;
  return kNeighbors8;
}

}  // namespace landconn
