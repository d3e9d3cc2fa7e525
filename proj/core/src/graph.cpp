#include "epsclust/graph.hpp"

#include <algorithm>
#include <string>

#include "epsclust/error.hpp"

namespace epsclust {

NeighborhoodGraph NeighborhoodGraph::from_edges(
    std::vector<double> weights, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    double epsilon) {
  NeighborhoodGraph g;
  const std::size_t n = weights.size();
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("graph weights must be positive");
  }
  g.weights_ = std::move(weights);
  g.epsilon_ = epsilon;
  g.adjacency_.resize(n);
  g.vertex_ids_.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.vertex_ids_[i] = i;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loops are not allowed");
    g.adjacency_[u].push_back(static_cast<std::uint32_t>(v));
    g.adjacency_[v].push_back(static_cast<std::uint32_t>(u));
  }
  for (auto& nb : g.adjacency_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw ValidationError("duplicate edge");
    }
  }
  return g;
}

bool NeighborhoodGraph::adjacent(std::size_t u, std::size_t v) const noexcept {
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(v));
}

std::size_t NeighborhoodGraph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& nb : adjacency_) twice += nb.size();
  return twice / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> NeighborhoodGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (auto v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

NeighborhoodGraph build_graph(const WeightedDataset& ds, const Chunk& chunk, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("build_graph: epsilon must be positive");
  const std::size_t n = chunk.size();
  const std::size_t dim = ds.dim();

  // Gather chunk coordinates contiguously for the all-pairs scan.
  std::vector<double> local(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = ds.coords(chunk.member_ids[i]);
    std::copy(c.begin(), c.end(), local.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }

  NeighborhoodGraph g;
  g.epsilon_ = epsilon;
  g.vertex_ids_ = chunk.member_ids;
  g.weights_.resize(n);
  g.adjacency_.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.weights_[i] = ds.weight(chunk.member_ids[i]);

  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = local.data() + i * dim;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance_unchecked(ds.metric(), xi, local.data() + j * dim, dim);
      if (d == 0.0) {
        throw ValidationError("build_graph: points " + std::to_string(chunk.member_ids[i]) + " and " +
                              std::to_string(chunk.member_ids[j]) + " coincide; dedupe first");
      }
      if (d < epsilon) {
        g.adjacency_[i].push_back(static_cast<std::uint32_t>(j));
        g.adjacency_[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  // Rows are filled in increasing j for j > i, and in increasing i for
  // i < j before that, so each list is already sorted.
  return g;
}

double weighted_degree(const NeighborhoodGraph& g, std::size_t v) {
  double s = 0.0;
  for (auto u : g.neighbors(v)) s += g.weight(u);
  return s / g.weight(v);
}

double average_weighted_degree(const NeighborhoodGraph& g) {
  // w(v)·deg_w(v) = ω(N_v), so the numerator is Σ_v ω(N_v).
  double num = 0.0;
  double total = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (auto u : g.neighbors(v)) num += g.weight(u);
    total += g.weight(v);
  }
  return total > 0.0 ? num / total : 0.0;
}

}  // namespace epsclust
