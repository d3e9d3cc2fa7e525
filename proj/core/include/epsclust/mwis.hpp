#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epsclust/dataset.hpp"
#include "epsclust/graph.hpp"
#include "epsclust/rng.hpp"

namespace epsclust {

/// Vertex subset of a NeighborhoodGraph with no two members adjacent.
struct IndependentSet {
  std::vector<std::size_t> vertices;  ///< ascending graph-local indices
  double total_weight = 0.0;
};

inline constexpr std::size_t kExactMwisLimit = 26;

/// Greedy heuristic: repeatedly take a vertex of minimum weighted degree in
/// the remaining graph (ties broken uniformly with `rng`) and remove it
/// together with its neighbours. Degrees are dynamic: they count only
/// neighbours still in the candidate set. The result is maximal.
IndependentSet greedy_mwis(const NeighborhoodGraph& g, Rng& rng);

/// Branch-and-bound maximum weight independent set. Among optimal sets the
/// lexicographically smallest ascending vertex sequence is returned.
/// Throws SizeLimitError above kExactMwisLimit vertices.
IndependentSet exact_mwis(const NeighborhoodGraph& g);

/// Runs exact_mwis on every connected component; the size guard applies to
/// the largest component rather than the whole graph.
IndependentSet exact_mwis_by_components(const NeighborhoodGraph& g);

bool is_independent(const NeighborhoodGraph& g, std::span<const std::size_t> vertices);

/// True when no vertex outside `vertices` can be added without breaking
/// independence.
bool is_maximal_independent(const NeighborhoodGraph& g, std::span<const std::size_t> vertices);

/// Every distinct pair of `ids` is at distance >= epsilon.
bool is_eps_separated(const WeightedDataset& ds, std::span<const std::size_t> ids, double epsilon);

/// Every point of `universe` lies strictly within epsilon of some member of
/// `ids`.
bool is_eps_dense(const WeightedDataset& ds, std::span<const std::size_t> ids,
                  std::span<const std::size_t> universe, double epsilon);

}  // namespace epsclust
