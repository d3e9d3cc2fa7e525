#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "epsclust/dataset.hpp"
#include "epsclust/partition.hpp"

namespace epsclust {

/// The ε-induced weighted graph of a chunk: vertex i is the chunk's i-th
/// member, and i ~ j iff d(x_i, x_j) < ε for i != j. No self-loops.
class NeighborhoodGraph {
public:
  NeighborhoodGraph() = default;

  /// Builds a graph from an explicit edge list. Edges are symmetrised;
  /// self-loops and duplicates are rejected. Weights must be positive.
  static NeighborhoodGraph from_edges(std::vector<double> weights,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                      double epsilon = 1.0);

  std::size_t size() const noexcept { return weights_.size(); }
  double epsilon() const noexcept { return epsilon_; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const noexcept { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const noexcept { return adjacency_[v].size(); }
  bool adjacent(std::size_t u, std::size_t v) const noexcept;

  double weight(std::size_t v) const noexcept { return weights_[v]; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Dataset id of each vertex (identity for graphs built from edge lists).
  std::span<const std::size_t> vertex_ids() const noexcept { return vertex_ids_; }

  std::size_t edge_count() const noexcept;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

private:
  friend NeighborhoodGraph build_graph(const WeightedDataset&, const Chunk&, double);

  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<double> weights_;
  std::vector<std::size_t> vertex_ids_;
  double epsilon_ = 0.0;
};

/// O(d·|chunk|²) all-pairs construction. Throws ValidationError when
/// epsilon <= 0 or two chunk members have coincident coordinates.
NeighborhoodGraph build_graph(const WeightedDataset& ds, const Chunk& chunk, double epsilon);

/// deg_w(v) = ω(N_v) / w(v).
double weighted_degree(const NeighborhoodGraph& g, std::size_t v);

/// Σ_v w(v)·deg_w(v) / ω(V).
double average_weighted_degree(const NeighborhoodGraph& g);

}  // namespace epsclust
