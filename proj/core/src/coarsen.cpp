#include "epsclust/coarsen.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "epsclust/error.hpp"
#include "epsclust/qubo.hpp"

namespace epsclust {

SolverKind parse_solver(std::string_view name) {
  if (name == "greedy") return SolverKind::greedy;
  if (name == "exact") return SolverKind::exact;
  if (name == "anneal") return SolverKind::anneal;
  throw ValidationError("unknown solver '" + std::string(name) + "' (expected greedy, exact or anneal)");
}

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::greedy: return "greedy";
    case SolverKind::exact: return "exact";
    case SolverKind::anneal: return "anneal";
  }
  return "greedy";
}

IndependentSet solve_chunk_mwis(const NeighborhoodGraph& g, const SolverConfig& cfg, Rng& rng) {
  switch (cfg.kind) {
    case SolverKind::greedy:
      return greedy_mwis(g, rng);
    case SolverKind::exact:
      return exact_mwis_by_components(g);
    case SolverKind::anneal: {
      QuboProblem q = build_mwis_qubo(g, cfg.gamma);
      if (cfg.reduce) q = reduce_qubo(q);
      AnnealSchedule sched;
      sched.sweeps = cfg.sweeps;
      sched.restarts = cfg.restarts;
      sched.seed = rng();
      const auto sol = solve_qubo_anneal(q, sched);
      IndependentSet out;
      out.vertices = selected_vertices(q, restore_assignment(q, sol.bits));
      for (auto v : out.vertices) out.total_weight += g.weight(v);
      return out;
    }
  }
  throw ValidationError("unknown solver kind");
}

std::vector<CollapsedCell> collapse_chunk(const WeightedDataset& ds, std::span<const std::size_t> chunk,
                                          std::span<const std::size_t> reps, Rng& rng, bool use_centroids) {
  if (reps.empty()) throw ValidationError("collapse_chunk: representative set is empty");
  std::vector<std::size_t> sorted_reps(reps.begin(), reps.end());
  std::sort(sorted_reps.begin(), sorted_reps.end());
  std::vector<std::size_t> members(chunk.begin(), chunk.end());
  std::sort(members.begin(), members.end());

  const std::size_t k = sorted_reps.size();
  std::vector<CollapsedCell> cells(k);
  for (std::size_t c = 0; c < k; ++c) cells[c].representative = sorted_reps[c];

  std::vector<std::size_t> ties;
  for (auto y : members) {
    ties.clear();
    double best = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double d = ds.distance(y, sorted_reps[c]);
      if (ties.empty() || d < best) {
        best = d;
        ties.assign(1, c);
      } else if (d == best) {
        ties.push_back(c);
      }
    }
    const std::size_t c = ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
    cells[c].members.push_back(y);
  }

  const std::size_t dim = ds.dim();
  for (auto& cell : cells) {
    for (auto y : cell.members) cell.weight += ds.weight(y);
    if (use_centroids) {
      cell.coords.assign(dim, 0.0);
      for (auto y : cell.members) {
        auto x = ds.coords(y);
        for (std::size_t a = 0; a < dim; ++a) cell.coords[a] += ds.weight(y) * x[a];
      }
      for (auto& v : cell.coords) v /= cell.weight;
    } else {
      auto x = ds.coords(cell.representative);
      cell.coords.assign(x.begin(), x.end());
    }
  }
  return cells;
}

namespace {

// Members of `chunk` (ascending) whose coordinates differ from every
// earlier member.
std::vector<std::size_t> distinct_members(const WeightedDataset& ds, const std::vector<std::size_t>& chunk) {
  struct Key {
    const double* p;
  };
  const std::size_t dim = ds.dim();
  auto hash = [dim](const Key& k) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t a = 0; a < dim; ++a) {
      const double v = k.p[a] == 0.0 ? 0.0 : k.p[a];
      h = (h ^ std::bit_cast<std::uint64_t>(v)) * 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  };
  auto eq = [dim](const Key& a, const Key& b) { return std::equal(a.p, a.p + dim, b.p); };
  std::unordered_map<Key, std::size_t, decltype(hash), decltype(eq)> seen(chunk.size() * 2, hash, eq);
  std::vector<std::size_t> out;
  out.reserve(chunk.size());
  for (auto id : chunk) {
    if (seen.try_emplace(Key{ds.coords(id).data()}, id).second) out.push_back(id);
  }
  return out;
}

ChunkOutcome process_chunk(const WeightedDataset& nodes, Chunk chunk, const LevelConfig& cfg,
                           std::size_t chunk_index) {
  Rng rng(derive_seed(cfg.seed, {cfg.level, chunk_index}));
  ChunkOutcome out;
  Chunk distinct{distinct_members(nodes, chunk.member_ids)};
  const NeighborhoodGraph g = build_graph(nodes, distinct, cfg.epsilon);
  const IndependentSet set = solve_chunk_mwis(g, cfg.solver, rng);
  out.representatives.reserve(set.vertices.size());
  for (auto v : set.vertices) out.representatives.push_back(distinct.member_ids[v]);
  std::sort(out.representatives.begin(), out.representatives.end());
  out.cells = collapse_chunk(nodes, chunk.member_ids, out.representatives, rng, cfg.use_centroids);
  out.chunk = std::move(chunk);
  return out;
}

}  // namespace

std::vector<ChunkOutcome> coarsen_level(const WeightedDataset& nodes, const LevelConfig& cfg) {
  if (nodes.empty()) throw ValidationError("coarsen_level: empty node set");
  if (!(cfg.epsilon > 0.0)) throw ValidationError("coarsen_level: epsilon must be positive");

  std::vector<std::size_t> ids(nodes.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::vector<Chunk> chunks = partition(nodes, std::move(ids), PartitionConfig{cfg.kappa});

  std::vector<ChunkOutcome> outcomes(chunks.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.threads, chunks.size()));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      outcomes[c] = process_chunk(nodes, std::move(chunks[c]), cfg, c);
    }
    return outcomes;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks.size(); c = next++) {
          try {
            outcomes[c] = process_chunk(nodes, std::move(chunks[c]), cfg, c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

// ---------------------------------------------------------------------------
// Tree

void ClusterTree::link_parents() {
  parent.assign(nodes.size(), npos);
  for (const auto& node : nodes) {
    for (auto m : node.members) parent[m] = node.id;
  }
}

ClusterTree build_tree(const WeightedDataset& ds, const TreeParams& params,
                       const std::function<void(const LevelReport&)>& on_level) {
  if (ds.empty()) throw ValidationError("build_tree: dataset is empty");
  if (!(params.eps0 > 0.0)) throw ValidationError("eps0 must be positive");
  if (!(params.alpha > 1.0)) throw ValidationError("alpha must be greater than 1");
  if (params.kappa < 2) throw ValidationError("kappa must be at least 2");

  ClusterTree tree;
  tree.params = params;
  tree.dataset_hash = ds.content_hash();
  tree.dim = ds.dim();

  auto dedup = dedupe_with_map(ds);
  tree.point_leaf = std::move(dedup.representative);
  const WeightedDataset& leaves = dedup.data;

  tree.levels.emplace_back();
  tree.level_epsilon.push_back(0.0);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    auto c = leaves.coords(i);
    tree.nodes.push_back(ClusterNode{i, std::vector<double>(c.begin(), c.end()), leaves.weight(i), {}, 0});
    tree.levels[0].push_back(i);
  }

  WeightedDataset current = leaves;
  double epsilon = params.eps0;
  std::size_t level = 0;
  while (current.size() > 1 && level < params.max_levels) {
    ++level;
    const auto start = std::chrono::steady_clock::now();
    LevelConfig cfg;
    cfg.epsilon = epsilon;
    cfg.kappa = params.kappa;
    cfg.solver = params.solver;
    cfg.seed = params.seed;
    cfg.level = level;
    cfg.use_centroids = params.use_centroids;
    cfg.threads = params.threads;
    const auto outcomes = coarsen_level(current, cfg);

    const auto& prev = tree.levels.back();
    std::vector<std::size_t> ids;
    std::vector<double> coords;
    std::vector<double> weights;
    for (const auto& oc : outcomes) {
      for (const auto& cell : oc.cells) {
        ClusterNode node;
        node.id = tree.nodes.size();
        node.level = level;
        node.coords = cell.coords;
        node.weight = cell.weight;
        node.members.reserve(cell.members.size());
        for (auto m : cell.members) node.members.push_back(prev[m]);
        coords.insert(coords.end(), cell.coords.begin(), cell.coords.end());
        weights.push_back(cell.weight);
        ids.push_back(node.id);
        tree.nodes.push_back(std::move(node));
      }
    }
    tree.levels.push_back(std::move(ids));
    tree.level_epsilon.push_back(epsilon);
    current = WeightedDataset(ds.dim(), std::move(coords), std::move(weights), ds.metric());

    if (on_level) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      on_level(LevelReport{level, epsilon, current.size(), dt.count()});
    }
    epsilon *= params.alpha;
  }

  if (current.size() == 1) {
    tree.status = TreeStatus::complete;
    tree.root_id = tree.levels.back().front();
  } else {
    tree.status = TreeStatus::truncated;
    tree.root_id = ClusterTree::npos;
  }
  tree.link_parents();
  return tree;
}

ClusteringAssignment labels_at_level(const ClusterTree& tree, std::size_t level) {
  if (level >= tree.level_count()) {
    throw ValidationError("level " + std::to_string(level) + " out of range [0, " +
                          std::to_string(tree.level_count() - 1) + "]");
  }
  // Ancestor at `level` of every leaf, computed level by level.
  std::vector<std::size_t> up(tree.levels[0].size());
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = tree.levels[0][i];
  for (std::size_t l = 0; l < level; ++l) {
    for (auto& node : up) {
      node = tree.parent.at(node);
      if (node == ClusterTree::npos) throw ValidationError("tree is missing parent links");
    }
  }
  ClusteringAssignment out;
  out.level = level;
  out.n_clusters = tree.levels[level].size();
  out.labels.resize(tree.point_leaf.size());
  for (std::size_t p = 0; p < tree.point_leaf.size(); ++p) {
    const auto leaf = tree.point_leaf[p];
    // Leaves are numbered 0..m-1, matching positions in levels[0].
    out.labels[p] = up.at(leaf);
  }
  return out;
}

double estimate_initial_radius(const WeightedDataset& ds, double fraction, std::uint64_t seed,
                               std::size_t sample_size) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("collapse fraction must lie in (0, 1)");
  const WeightedDataset points = dedupe(ds);
  const std::size_t n = points.size();
  if (n < 2) return 1.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, {0xe0e0ULL}));
  const std::size_t m = std::min(sample_size, n);
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(order[i], order[i + uniform_index(rng, n - i)]);
  }

  std::vector<double> nn(m, std::numeric_limits<double>::infinity());
  for (std::size_t s = 0; s < m; ++s) {
    const auto a = order[s];
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a) nn[s] = std::min(nn[s], points.distance(a, b));
    }
  }
  std::sort(nn.begin(), nn.end());
  // A point collapses when some neighbour lies within ε and the neighbour
  // is kept; about half of the points that have a neighbour collapse.
  const double q = std::min(1.0, 2.0 * fraction);
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(m - 1)));
  return std::nextafter(nn[idx], std::numeric_limits<double>::infinity());
}

}  // namespace epsclust
