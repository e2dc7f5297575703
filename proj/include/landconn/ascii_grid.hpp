// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// ESRI ASCII grid reading and writing.
//
//   ncols        <int>
//   nrows        <int>
//   xllcorner    <real>     (xllcenter accepted on read)
//   yllcorner    <real>     (yllcenter accepted on read)
//   cellsize     <real>
//   nodata_value <real>     (optional on read, always written)
//   nrows lines of ncols values, top row first
//
// Writing is canonical: single-space separators, shortest round-trip
// numbers, integers without a decimal point, "inf" for infinite costs.

#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "landconn/format.hpp"
#include "landconn/grid.hpp"

namespace landconn {

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline bool is_number_word(const std::string& w) {
  std::string_view v = w;
  if (!v.empty() && (v.front() == '-' || v.front() == '+')) v.remove_prefix(1);
  return v == "inf" || v == "infinity" || v == "nan";
}

struct ParsedAscii {
  GridHeader header;
  std::vector<std::string_view> tokens;
};

inline void split_tokens(std::string_view text,
                         std::vector<std::string_view>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
}

inline ParsedAscii parse_ascii(std::string_view text) {
  ParsedAscii p;
  bool have_ncols = false, have_nrows = false, have_x = false, have_y = false,
       have_cs = false;
  bool x_center = false, y_center = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    if (line.empty()) {
      pos = eol + 1;
      continue;
    }
    std::size_t sp = line.find_first_of(" \t");
    std::string key = lower(line.substr(0, sp));
    if (!std::isalpha(static_cast<unsigned char>(key[0])) ||
        is_number_word(key)) {
      break;  // first body line
    }
    if (sp == std::string_view::npos) {
      throw ParseError("grid header: missing value for key '" + key + "'",
                       key);
    }
    std::string_view val = trim(line.substr(sp));
    auto num = parse_double(val);
    if (!num) {
      throw ParseError("grid header: malformed value '" + std::string(val) +
                           "' for key '" + key + "'",
                       key);
    }
    auto as_int = [&]() {
      auto iv = parse_integer(val);
      if (!iv || *iv < 1 || *iv > 1'000'000'000) {
        throw ParseError("grid header: '" + key +
                             "' must be a positive integer, got '" +
                             std::string(val) + "'",
                         key);
      }
      return static_cast<int>(*iv);
    };
    if (key == "ncols") {
      p.header.ncols = as_int();
      have_ncols = true;
    } else if (key == "nrows") {
      p.header.nrows = as_int();
      have_nrows = true;
    } else if (key == "xllcorner" || key == "xllcenter") {
      p.header.xllcorner = *num;
      x_center = key == "xllcenter";
      have_x = true;
    } else if (key == "yllcorner" || key == "yllcenter") {
      p.header.yllcorner = *num;
      y_center = key == "yllcenter";
      have_y = true;
    } else if (key == "cellsize") {
      if (!(*num > 0.0)) {
        throw ParseError("grid header: cellsize must be > 0", key);
      }
      p.header.cellsize = *num;
      have_cs = true;
    } else if (key == "nodata_value") {
      p.header.nodata_value = *num;
    } else {
      throw ParseError("grid header: unknown key '" + key + "'", key);
    }
    pos = eol + 1;
  }
  if (!have_ncols) throw ParseError("grid header: missing 'ncols'", "ncols");
  if (!have_nrows) throw ParseError("grid header: missing 'nrows'", "nrows");
  if (!have_x) throw ParseError("grid header: missing 'xllcorner'", "xllcorner");
  if (!have_y) throw ParseError("grid header: missing 'yllcorner'", "yllcorner");
  if (!have_cs) throw ParseError("grid header: missing 'cellsize'", "cellsize");
  if (x_center) p.header.xllcorner -= 0.5 * p.header.cellsize;
  if (y_center) p.header.yllcorner -= 0.5 * p.header.cellsize;
  p.header.validate();

  if (pos < text.size()) split_tokens(text.substr(pos), p.tokens);
  const std::size_t expected = p.header.cell_count();
  if (p.tokens.size() < expected) {
    throw TruncationError(expected, p.tokens.size());
  }
  if (p.tokens.size() > expected) {
    throw ParseError("grid body: " + std::to_string(p.tokens.size()) +
                         " values, header declares " +
                         std::to_string(expected),
                     "body");
  }
  return p;
}

template <typename T>
Grid<T> build_grid(const ParsedAscii& p) {
  Grid<T> g(p.header);
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    auto tok = p.tokens[i];
    auto v = parse_double(tok);
    if (!v) {
      throw ParseError("grid body: malformed value '" + std::string(tok) +
                           "' at cell " + std::to_string(i),
                       "body");
    }
    if (*v == p.header.nodata_value) {
      g.set_nodata(i);
      continue;
    }
    if constexpr (std::is_integral_v<T>) {
      auto iv = parse_integer(tok);
      if (!iv) {
        throw ParseError("grid body: non-integer value '" + std::string(tok) +
                             "' in categorical grid at cell " +
                             std::to_string(i),
                         "body");
      }
      g.set(i, static_cast<T>(*iv));
    } else {
      if (std::isnan(*v)) {
        throw ParseError("grid body: NaN at cell " + std::to_string(i),
                         "body");
      }
      g.set(i, static_cast<T>(*v));
    }
  }
  return g;
}

}  // namespace detail

template <typename T>
Grid<T> parse_grid(std::string_view text) {
  return detail::build_grid<T>(detail::parse_ascii(text));
}

inline CategoricalGrid read_categorical_grid(const std::filesystem::path& p) {
  return parse_grid<std::int32_t>(read_text_file(p));
}

inline NumericGrid read_numeric_grid(const std::filesystem::path& p) {
  return parse_grid<double>(read_text_file(p));
}

using AnyGrid = std::variant<CategoricalGrid, NumericGrid>;

/// Reads a grid, returning the categorical flavour when every data value
/// is an integer literal.
inline AnyGrid read_grid(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  auto parsed = detail::parse_ascii(text);
  bool integral = true;
  for (auto tok : parsed.tokens) {
    auto v = parse_double(tok);
    if (v && *v == parsed.header.nodata_value) continue;
    if (!parse_integer(tok)) {
      integral = false;
      break;
    }
  }
  if (integral) return detail::build_grid<std::int32_t>(parsed);
  return detail::build_grid<double>(parsed);
}

template <typename T>
std::string format_grid(const Grid<T>& g) {
  const auto& h = g.header();
  std::string out;
  out.reserve(g.size() * 4 + 128);
  out += "ncols " + std::to_string(h.ncols) + "\n";
  out += "nrows " + std::to_string(h.nrows) + "\n";
  out += "xllcorner " + format_number(h.xllcorner) + "\n";
  out += "yllcorner " + format_number(h.yllcorner) + "\n";
  out += "cellsize " + format_number(h.cellsize) + "\n";
  out += "nodata_value " + format_number(h.nodata_value) + "\n";
  const std::string nodata = format_number(h.nodata_value);
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (c) out += ' ';
      auto idx = g.index(r, c);
      if (g.is_nodata(idx)) {
        out += nodata;
        continue;
      }
      double v = static_cast<double>(g[idx]);
      if (v == h.nodata_value) {
        throw DataError("grid value at row " + std::to_string(r) + ", col " +
                        std::to_string(c) +
                        " equals the nodata sentinel and would not "
                        "round-trip");
      }
      if constexpr (std::is_integral_v<T>) {
        out += std::to_string(g[idx]);
      } else {
        out += format_number(v);
      }
    }
    out += '\n';
  }
  return out;
}

template <typename T>
void write_grid(const Grid<T>& g, const std::filesystem::path& path) {
  write_text_file(path, format_grid(g));
}

inline void write_grid(const AnyGrid& g, const std::filesystem::path& path) {
  std::visit([&](const auto& grid) { write_grid(grid, path); }, g);
}

}  // namespace landconn
