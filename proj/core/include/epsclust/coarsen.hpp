#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "epsclust/dataset.hpp"
#include "epsclust/graph.hpp"
#include "epsclust/mwis.hpp"
#include "epsclust/partition.hpp"
#include "epsclust/rng.hpp"

namespace epsclust {

enum class SolverKind { greedy, exact, anneal };

SolverKind parse_solver(std::string_view name);
std::string_view to_string(SolverKind kind) noexcept;

struct SolverConfig {
  SolverKind kind = SolverKind::greedy;
  double gamma = 0.1;          ///< QUBO penalty margin (anneal route)
  std::size_t sweeps = 2000;   ///< anneal route
  std::size_t restarts = 10;   ///< anneal route
  bool reduce = true;          ///< fix isolated vertices before annealing
};

/// Maximum-weight ε-separated subset of a chunk graph via the configured
/// route. The exact route solves each connected component separately; the
/// anneal route builds the MWIS QUBO, optionally reduces it, and anneals.
IndependentSet solve_chunk_mwis(const NeighborhoodGraph& g, const SolverConfig& cfg, Rng& rng);

/// One Voronoi cell produced by collapsing a chunk onto representatives.
struct CollapsedCell {
  std::size_t representative = 0;    ///< dataset id of the representative
  std::vector<std::size_t> members;  ///< dataset ids, ascending; includes the representative
  double weight = 0.0;               ///< ω(C_x)
  std::vector<double> coords;        ///< representative coordinates or weighted centroid
};

/// Assigns every chunk member to its nearest representative. Members that
/// are equidistant to several representatives are assigned by a uniform
/// draw from `rng`, made in ascending member order. Cells are returned in
/// ascending representative order.
std::vector<CollapsedCell> collapse_chunk(const WeightedDataset& ds, std::span<const std::size_t> chunk,
                                          std::span<const std::size_t> reps, Rng& rng, bool use_centroids);

struct LevelConfig {
  double epsilon = 1.0;
  std::size_t kappa = 1000;
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::size_t level = 1;  ///< index of the level being built; selects RNG streams
  bool use_centroids = true;
  std::size_t threads = 1;
};

struct ChunkOutcome {
  Chunk chunk;
  std::vector<std::size_t> representatives;  ///< dataset ids, ascending
  std::vector<CollapsedCell> cells;
};

/// One partition/solve/collapse pass over a node set, given as a dataset
/// whose rows are the current nodes. Members with coincident coordinates
/// inside a chunk are solved once and collapse together. Chunks are
/// processed on `threads` workers; the output is independent of the
/// worker count.
std::vector<ChunkOutcome> coarsen_level(const WeightedDataset& nodes, const LevelConfig& cfg);

struct ClusterNode {
  std::size_t id = 0;
  std::vector<double> coords;
  double weight = 0.0;
  std::vector<std::size_t> members;  ///< node ids one level down
  std::size_t level = 0;
};

struct TreeParams {
  double eps0 = 1.0;
  double alpha = 1.3;
  std::size_t kappa = 1000;
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::size_t max_levels = 64;
  bool use_centroids = true;
  std::size_t threads = 1;
};

enum class TreeStatus { complete, truncated };

struct ClusterTree {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<ClusterNode> nodes;               ///< node id == index
  std::vector<std::vector<std::size_t>> levels;  ///< level 0 = leaves
  std::vector<double> level_epsilon;            ///< radius that produced each level (0 for leaves)
  std::vector<std::size_t> point_leaf;          ///< input point id -> leaf node id
  std::vector<std::size_t> parent;              ///< node id -> node one level up, or npos
  std::size_t root_id = npos;                   ///< npos when truncated
  TreeStatus status = TreeStatus::complete;
  TreeParams params;
  std::uint64_t dataset_hash = 0;
  std::size_t dim = 0;

  std::size_t level_count() const noexcept { return levels.size(); }

  /// Recomputes `parent` from member lists.
  void link_parents();
};

struct LevelReport {
  std::size_t level = 0;
  double epsilon = 0.0;
  std::size_t node_count = 0;
  double seconds = 0.0;
};

/// Iterates coarsening passes with ε ← α·ε until one node remains or
/// `max_levels` passes have run (status truncated). The input is
/// deduplicated first; leaves are the distinct points.
ClusterTree build_tree(const WeightedDataset& ds, const TreeParams& params,
                       const std::function<void(const LevelReport&)>& on_level = {});

struct ClusteringAssignment {
  std::vector<std::size_t> labels;  ///< input point id -> cluster id
  std::size_t level = 0;
  std::size_t n_clusters = 0;
};

/// Labels each input point by the node it belongs to at `level`.
ClusteringAssignment labels_at_level(const ClusterTree& tree, std::size_t level);

/// Radius at which roughly `fraction` of the nodes collapse in the first
/// pass, estimated from nearest-neighbour distances of a seeded sample.
double estimate_initial_radius(const WeightedDataset& ds, double fraction, std::uint64_t seed,
                               std::size_t sample_size = 256);

}  // namespace epsclust
