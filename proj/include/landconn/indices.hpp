// Copyright 2026 The landconn Authors
// SPDX-License-Identifier: Apache-2.0

// Probabilistic functional connectivity between subnets.
//
//   k     = ln(0.5) / dist50
//   p_ij  = exp(k * cost_ij)
//   RPC   = sqrt(sum_i sum_j a_i a_j p_ij) / A_L
//   RAPC  = sqrt(sum_i sum_j p_ij) / n
//
// Both double sums run over all ordered pairs, diagonal included (p_ii = 1).

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landconn/costdist.hpp"
#include "landconn/error.hpp"
#include "landconn/format.hpp"

namespace landconn {

inline constexpr double kDefaultDist50 = 500.0;
inline constexpr double kDefaultIsolationThreshold = 0.05;

struct DispersalParams {
  double dist50 = kDefaultDist50;  // meters
  double k = std::log(0.5) / kDefaultDist50;  // 1/meters, negative
};

inline DispersalParams dispersal_k(double dist50) {
  if (!(dist50 > 0.0) || !std::isfinite(dist50)) {
    throw DomainError("dist50 must be a finite distance > 0, got " +
                      format_number(dist50));
  }
  return {dist50, std::log(0.5) / dist50};
}

struct ProbabilityMatrix {
  std::size_t n = 0;
  std::vector<double> p;

  ProbabilityMatrix() = default;
  explicit ProbabilityMatrix(std::size_t size, double fill = 0.0)
      : n(size), p(size * size, fill) {
    for (std::size_t i = 0; i < n; ++i) at(i, i) = 1.0;
  }
  double& at(std::size_t i, std::size_t j) { return p[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
};

inline ProbabilityMatrix probability_matrix(const CostMatrix& costs,
                                            const DispersalParams& params) {
  ProbabilityMatrix out(costs.n);
  for (std::size_t i = 0; i < costs.n; ++i) {
    for (std::size_t j = 0; j < costs.n; ++j) {
      if (i == j) continue;
      double c = costs.at(i, j);
      out.at(i, j) = std::isinf(c) ? 0.0 : std::exp(params.k * c);
    }
  }
  return out;
}

inline double rpc(std::span<const double> areas, const ProbabilityMatrix& probs,
                  double landscape_area) {
  if (!(landscape_area > 0.0)) {
    throw DomainError("RPC: landscape area must be > 0");
  }
  if (areas.size() != probs.n) {
    throw DomainError("RPC: " + std::to_string(areas.size()) +
                      " areas for a " + std::to_string(probs.n) +
                      "-subnet probability matrix");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.n; ++i) {
    for (std::size_t j = 0; j < probs.n; ++j) {
      sum += areas[i] * areas[j] * probs.at(i, j);
    }
  }
  return std::sqrt(sum) / landscape_area;
}

inline double rapc(const ProbabilityMatrix& probs) {
  if (probs.n == 0) throw DomainError("RAPC: no subnets");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.n; ++i) {
    for (std::size_t j = 0; j < probs.n; ++j) sum += probs.at(i, j);
  }
  return std::sqrt(sum) / static_cast<double>(probs.n);
}

/// Subnet i is isolated when its best partner probability is below p_iso.
/// A lone subnet has no partner and counts as isolated.
inline double isolated_share(const ProbabilityMatrix& probs, double p_iso) {
  if (!(p_iso > 0.0 && p_iso < 1.0)) {
    throw DomainError("isolation threshold must lie in (0, 1), got " +
                      format_number(p_iso));
  }
  if (probs.n == 0) throw DomainError("isolated share: no subnets");
  std::size_t isolated = 0;
  for (std::size_t i = 0; i < probs.n; ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < probs.n; ++j) {
      if (j != i) best = std::max(best, probs.at(i, j));
    }
    isolated += best < p_iso;
  }
  return static_cast<double>(isolated) / static_cast<double>(probs.n);
}

struct FunctionalIndices {
  double rpc = 0.0;
  double rapc = 0.0;
  double isolated_share = 0.0;
  DispersalParams params;
  double p_iso = kDefaultIsolationThreshold;
};

inline FunctionalIndices functional_indices(std::span<const double> areas,
                                            const CostMatrix& costs,
                                            double landscape_area,
                                            const DispersalParams& params,
                                            double p_iso) {
  auto probs = probability_matrix(costs, params);
  FunctionalIndices out;
  out.rpc = rpc(areas, probs, landscape_area);
  out.rapc = rapc(probs);
  out.isolated_share = isolated_share(probs, p_iso);
  out.params = params;
  out.p_iso = p_iso;
  return out;
}

}  // namespace landconn
