#pragma once

// Brute-force reference computations shared by the unit and acceptance
// tests. Everything here is deliberately naive.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "epsclust/dataset.hpp"
#include "epsclust/graph.hpp"
#include "epsclust/partition.hpp"

namespace oracle {

using epsclust::NeighborhoodGraph;
using epsclust::WeightedDataset;

inline double subset_weight(const NeighborhoodGraph& g, std::uint64_t mask) {
  double w = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (mask >> v & 1U) w += g.weight(v);
  return w;
}

inline bool mask_independent(const NeighborhoodGraph& g, std::uint64_t mask) {
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (!(mask >> u & 1U)) continue;
    for (auto v : g.neighbors(u))
      if (mask >> v & 1U) return false;
  }
  return true;
}

/// Maximum independent-set weight by enumerating all 2^n subsets.
inline double mwis_weight(const NeighborhoodGraph& g) {
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.size()); ++mask)
    if (mask_independent(g, mask)) best = std::max(best, subset_weight(g, mask));
  return best;
}

/// Minimum total cost of a vertex set whose closed neighbourhoods cover
/// every vertex (weighted set cover over ε-balls).
inline double min_cover_cost(const NeighborhoodGraph& g, const std::vector<double>& costs) {
  const std::size_t n = g.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    bool covered = true;
    for (std::size_t v = 0; v < n && covered; ++v) {
      bool hit = mask >> v & 1U;
      for (auto u : g.neighbors(v)) hit = hit || (mask >> u & 1U);
      covered = hit;
    }
    if (!covered) continue;
    double c = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1U) c += costs[v];
    best = std::min(best, c);
  }
  return best;
}

/// Erdős–Rényi graph with weights uniform in [lo, hi].
inline NeighborhoodGraph random_graph(std::mt19937_64& rng, std::size_t n, double p, double lo = 0.5,
                                      double hi = 5.0) {
  std::uniform_real_distribution<double> wd(lo, hi);
  std::bernoulli_distribution edge(p);
  std::vector<double> w(n);
  for (auto& x : w) x = wd(rng);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) edges.emplace_back(i, j);
  return NeighborhoodGraph::from_edges(std::move(w), edges);
}

/// n points uniform in [0, extent]^dim with weights uniform in [1, 3].
inline WeightedDataset random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, double extent,
                                     bool unit_weights = false) {
  std::uniform_real_distribution<double> cd(0.0, extent);
  std::uniform_real_distribution<double> wd(1.0, 3.0);
  std::vector<double> coords(n * dim);
  std::vector<double> weights(n, 1.0);
  for (auto& c : coords) c = cd(rng);
  if (!unit_weights)
    for (auto& w : weights) w = wd(rng);
  return WeightedDataset(dim, std::move(coords), std::move(weights));
}

inline epsclust::Chunk all_of(const WeightedDataset& ds) {
  epsclust::Chunk c;
  for (std::size_t i = 0; i < ds.size(); ++i) c.member_ids.push_back(i);
  return c;
}

/// Euclidean norm helper for score oracles.
inline double norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace oracle
