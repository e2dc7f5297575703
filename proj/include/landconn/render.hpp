// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// Map rendering to binary PPM (P6), one pixel per cell, with a legend
// written next to the image as `<image>.legend.txt`.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "landconn/format.hpp"
#include "landconn/grid.hpp"

namespace landconn {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kNodataColor = {0, 0, 0};
inline constexpr Rgb kBackgroundColor = {235, 235, 235};
inline constexpr int kMaxClasses = 9;

struct Palette {
  std::string name;
  bool categorical = false;
  std::vector<Rgb> colors;
};

inline const std::vector<Palette>& palettes() {
  static const std::vector<Palette> all = {
      {"categorical",
       true,
       {{31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40},
        {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
        {188, 189, 34}, {23, 190, 207}, {174, 199, 232}, {255, 187, 120}}},
      {"greens",
       false,
       {{247, 252, 245}, {229, 245, 224}, {199, 233, 192}, {161, 217, 155},
        {116, 196, 118}, {65, 171, 93}, {35, 139, 69}, {0, 109, 44},
        {0, 68, 27}}},
      {"viridis",
       false,
       {{68, 1, 84}, {72, 40, 120}, {62, 74, 137}, {49, 104, 142},
        {38, 130, 142}, {31, 158, 137}, {53, 183, 121}, {110, 206, 88},
        {253, 231, 37}}},
      {"rdylgn",
       false,
       {{215, 48, 39}, {244, 109, 67}, {253, 174, 97}, {254, 224, 139},
        {255, 255, 191}, {217, 239, 139}, {166, 217, 106}, {102, 189, 99},
        {26, 152, 80}}},
  };
  return all;
}

inline const Palette& find_palette(const std::string& name) {
  for (const auto& p : palettes()) {
    if (p.name == name) return p;
  }
  std::string list;
  for (const auto& p : palettes()) {
    if (!list.empty()) list += ", ";
    list += p.name;
  }
  throw ConfigError("unknown palette '" + name + "'; available: " + list);
}

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;
  const Rgb& at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
};

/// One equal-interval class [lower, upper); the last class is closed.
struct LegendClass {
  double lower = 0.0;
  double upper = 0.0;
  Rgb color{};
};

struct RenderedMap {
  Image image;
  std::vector<LegendClass> classes;     // numeric maps
  std::map<int, Rgb> category_colors;   // categorical maps
};

inline Rgb ramp_color(const Palette& p, int cls, int n_classes) {
  if (n_classes <= 1) return p.colors[p.colors.size() - 1];
  double t = static_cast<double>(cls) / (n_classes - 1);
  auto idx = static_cast<std::size_t>(std::lround(t * (p.colors.size() - 1)));
  return p.colors[idx];
}

/// Equal-interval binning over the finite data range. Nodata and infinite
/// cells take the reserved nodata colour.
inline RenderedMap render_numeric(const NumericGrid& grid,
                                  const std::string& palette_name,
                                  int n_classes = 5) {
  const Palette& pal = find_palette(palette_name);
  if (pal.categorical) {
    throw ConfigError("palette '" + palette_name +
                      "' is categorical; numeric maps need a ramp palette");
  }
  if (n_classes < 1 || n_classes > kMaxClasses) {
    throw ConfigError("class count must be in 1..9, got " +
                      std::to_string(n_classes));
  }
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_nodata(i) || !std::isfinite(grid[i])) continue;
    lo = std::min(lo, grid[i]);
    hi = std::max(hi, grid[i]);
  }
  RenderedMap out;
  out.image = {grid.cols(), grid.rows(),
               std::vector<Rgb>(grid.size(), kNodataColor)};
  if (!std::isfinite(lo)) return out;  // nothing to bin
  const double width = (hi - lo) / n_classes;
  for (int k = 0; k < n_classes; ++k) {
    double a = lo + width * k;
    double b = k == n_classes - 1 ? hi : lo + width * (k + 1);
    out.classes.push_back({a, b, ramp_color(pal, k, n_classes)});
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_nodata(i) || !std::isfinite(grid[i])) continue;
    int k = width > 0 ? static_cast<int>(std::floor((grid[i] - lo) / width)) : 0;
    k = std::clamp(k, 0, n_classes - 1);
    out.image.pixels[i] = out.classes[k].color;
  }
  return out;
}

/// Code 0 is background; other codes cycle through the categorical
/// palette. A ramp palette bins the codes as numbers instead.
inline RenderedMap render_categorical(const CategoricalGrid& grid,
                                      const std::string& palette_name,
                                      int n_classes = 5) {
  const Palette& pal = find_palette(palette_name);
  if (!pal.categorical) {
    NumericGrid num(grid.header(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.is_nodata(i)) {
        num.set_nodata(i);
      } else {
        num.set(i, grid[i]);
      }
    }
    return render_numeric(num, palette_name, n_classes);
  }
  RenderedMap out;
  out.image = {grid.cols(), grid.rows(),
               std::vector<Rgb>(grid.size(), kNodataColor)};
  const auto n = static_cast<long long>(pal.colors.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_nodata(i)) continue;
    int code = grid[i];
    Rgb c = code == 0 ? kBackgroundColor
                      : pal.colors[static_cast<std::size_t>(
                            ((static_cast<long long>(code) - 1) % n + n) % n)];
    out.image.pixels[i] = c;
    out.category_colors[code] = c;
  }
  return out;
}

inline std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  for (const auto& px : img.pixels) {
    out.push_back(static_cast<char>(px[0]));
    out.push_back(static_cast<char>(px[1]));
    out.push_back(static_cast<char>(px[2]));
  }
  return out;
}

inline std::string format_legend(const RenderedMap& map) {
  auto rgb = [](const Rgb& c) {
    return std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
           std::to_string(c[2]);
  };
  std::string out = "# nodata " + rgb(kNodataColor) + "\n";
  if (!map.category_colors.empty()) {
    out += "code,r,g,b\n";
    for (const auto& [code, c] : map.category_colors) {
      out += std::to_string(code) + "," + rgb(c) + "\n";
    }
    return out;
  }
  out += "class,lower,upper,r,g,b\n";
  for (std::size_t k = 0; k < map.classes.size(); ++k) {
    const auto& cl = map.classes[k];
    out += std::to_string(k + 1) + "," + format_number(cl.lower) + "," +
           format_number(cl.upper) + "," + rgb(cl.color) + "\n";
  }
  return out;
}

inline std::filesystem::path legend_path(const std::filesystem::path& image) {
  return std::filesystem::path(image.string() + ".legend.txt");
}

inline void write_map(const RenderedMap& map, const std::filesystem::path& path) {
  write_text_file(path, encode_ppm(map.image));
  write_text_file(legend_path(path), format_legend(map));
}

/// Renders either grid flavour to `path` plus its legend sidecar.
template <typename T>
RenderedMap render_map(const Grid<T>& grid, const std::string& palette,
                       const std::filesystem::path& path, int n_classes = 5) {
  RenderedMap map;
  if constexpr (std::is_integral_v<T>) {
    map = render_categorical(grid, palette, n_classes);
  } else {
    map = render_numeric(grid, palette, n_classes);
  }
  write_map(map, path);
  return map;
}

}  // namespace landconn
