#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "epsclust/coarsen.hpp"
#include "epsclust/error.hpp"
#include "oracles.hpp"

using namespace epsclust;

namespace {

using Ids = std::vector<std::size_t>;

SolverConfig solver(SolverKind kind) {
  SolverConfig c;
  c.kind = kind;
  c.sweeps = 300;
  c.restarts = 3;
  return c;
}

LevelConfig level_cfg(double eps, std::size_t kappa, SolverKind kind = SolverKind::greedy) {
  LevelConfig c;
  c.epsilon = eps;
  c.kappa = kappa;
  c.solver = solver(kind);
  return c;
}

// Builds a small dendrogram by hand: 6 leaves, 4 nodes at level 1,
// 2 at level 2, root at level 3. Leaves 4 and 5 sit under c_{1,3} and c_{1,4}.
ClusterTree hand_tree() {
  ClusterTree t;
  auto add = [&](std::size_t level, Ids members, double w) {
    const std::size_t id = t.nodes.size();
    t.nodes.push_back(ClusterNode{id, {0.0}, w, std::move(members), level});
    if (t.levels.size() <= level) t.levels.resize(level + 1);
    t.levels[level].push_back(id);
    return id;
  };
  for (int i = 0; i < 6; ++i) add(0, {}, 1);
  const auto c11 = add(1, {0, 1}, 2);
  const auto c12 = add(1, {2, 3}, 2);
  const auto c13 = add(1, {4}, 1);
  const auto c14 = add(1, {5}, 1);
  const auto c21 = add(2, {c11, c12}, 4);
  const auto c23 = add(2, {c13, c14}, 2);
  t.root_id = add(3, {c21, c23}, 6);
  t.level_epsilon = {0, 1, 2, 3};
  t.point_leaf = {0, 1, 2, 3, 4, 5, 5};  // last input point duplicates leaf 5
  t.link_parents();
  return t;
}

double level_weight(const ClusterTree& t, std::size_t level) {
  double w = 0.0;
  for (auto id : t.levels[level]) w += t.nodes[id].weight;
  return w;
}

}  // namespace

TEST(Solver, NamesRoundTrip) {
  for (auto k : {SolverKind::greedy, SolverKind::exact, SolverKind::anneal}) EXPECT_EQ(parse_solver(to_string(k)), k);
  EXPECT_THROW(parse_solver("quantum"), ValidationError);
}

TEST(Solver, AllRoutesReturnMaximalIndependentSets) {
  std::mt19937_64 gen(1);
  for (auto kind : {SolverKind::greedy, SolverKind::exact, SolverKind::anneal}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto g = oracle::random_graph(gen, 3 + trial % 20, 0.2);
      Rng rng(trial);
      const auto s = solve_chunk_mwis(g, solver(kind), rng);
      ASSERT_TRUE(is_independent(g, s.vertices));
      ASSERT_TRUE(is_maximal_independent(g, s.vertices));
    }
  }
}

TEST(Collapse, LineExample) {
  const WeightedDataset ds(1, {0, 1, 3}, {1, 1, 1});
  Rng rng(0);
  const auto cells = collapse_chunk(ds, Ids{0, 1, 2}, Ids{0, 2}, rng, true);
  ASSERT_EQ(cells.size(), 2U);
  EXPECT_EQ(cells[0].members, (Ids{0, 1}));
  EXPECT_EQ(cells[0].weight, 2.0);
  EXPECT_EQ(cells[0].coords, (std::vector<double>{0.5}));
  EXPECT_EQ(cells[1].members, (Ids{2}));
  EXPECT_EQ(cells[1].coords, (std::vector<double>{3.0}));

  Rng rng2(0);
  const auto raw = collapse_chunk(ds, Ids{0, 1, 2}, Ids{0, 2}, rng2, false);
  EXPECT_EQ(raw[0].coords, (std::vector<double>{0.0}));
}

TEST(Collapse, WeightedCentroid) {
  const WeightedDataset ds(1, {0, 4}, {3, 1});
  Rng rng(0);
  const auto cells = collapse_chunk(ds, Ids{0, 1}, Ids{0}, rng, true);
  ASSERT_EQ(cells.size(), 1U);
  EXPECT_DOUBLE_EQ(cells[0].coords[0], 1.0);
  EXPECT_EQ(cells[0].weight, 4.0);
}

TEST(Collapse, RepsEqualChunkIsIdentity) {
  std::mt19937_64 gen(2);
  const auto ds = oracle::random_points(gen, 20, 2, 10.0);
  Ids all(20);
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng rng(0);
  const auto cells = collapse_chunk(ds, all, all, rng, true);
  ASSERT_EQ(cells.size(), 20U);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(cells[i].members, (Ids{i}));
    EXPECT_EQ(cells[i].weight, ds.weight(i));
  }
}

TEST(Collapse, EquidistantTieIsSeededAndConserving) {
  const WeightedDataset ds(1, {-1, 0, 1}, {1, 1, 1});
  std::set<std::size_t> owners;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng a(seed), b(seed);
    const auto cells = collapse_chunk(ds, Ids{0, 1, 2}, Ids{0, 2}, a, true);
    const auto again = collapse_chunk(ds, Ids{0, 1, 2}, Ids{0, 2}, b, true);
    ASSERT_EQ(cells.size(), 2U);
    EXPECT_EQ(cells[0].members, again[0].members);
    EXPECT_EQ(cells[0].weight + cells[1].weight, 3.0);
    owners.insert(cells[0].members.size() == 2 ? 0 : 2);
  }
  EXPECT_EQ(owners.size(), 2U);
}

TEST(Collapse, EmptyRepsThrow) {
  const WeightedDataset ds(1, {0}, {1});
  Rng rng(0);
  EXPECT_THROW(collapse_chunk(ds, Ids{0}, Ids{}, rng, true), ValidationError);
}

TEST(CoarsenLevel, FarPointsSurvive) {
  const WeightedDataset ds(2, {0, 0, 10, 10}, {1, 1});
  const auto out = coarsen_level(ds, level_cfg(1.0, 10));
  ASSERT_EQ(out.size(), 1U);
  EXPECT_EQ(out[0].cells.size(), 2U);
}

TEST(CoarsenLevel, TwoPairsMerge) {
  const WeightedDataset ds(1, {0, 0.5, 10, 10.5}, {1, 1, 1, 1});
  const auto out = coarsen_level(ds, level_cfg(1.0, 10, SolverKind::exact));
  ASSERT_EQ(out[0].cells.size(), 2U);
  EXPECT_EQ(out[0].cells[0].weight, 2.0);
  EXPECT_EQ(out[0].cells[1].weight, 2.0);
  EXPECT_NEAR(out[0].cells[0].coords[0], 0.25, 1e-12);
  EXPECT_NEAR(out[0].cells[1].coords[0], 10.25, 1e-12);
}

TEST(CoarsenLevel, CompleteGraphCollapsesToOne) {
  std::mt19937_64 gen(3);
  const auto ds = oracle::random_points(gen, 30, 3, 1.0);
  for (auto kind : {SolverKind::greedy, SolverKind::anneal}) {
    const auto out = coarsen_level(ds, level_cfg(10.0, 100, kind));
    ASSERT_EQ(out[0].cells.size(), 1U);
    EXPECT_NEAR(out[0].cells[0].weight, ds.total_weight(), 1e-12);
  }
}

TEST(CoarsenLevel, CoincidentNodesCollapseTogether) {
  const WeightedDataset ds(1, {2, 2, 2, 50}, {1, 2, 3, 4});
  const auto out = coarsen_level(ds, level_cfg(1.0, 10));
  ASSERT_EQ(out[0].cells.size(), 2U);
  EXPECT_EQ(out[0].cells[0].weight, 6.0);
  EXPECT_EQ(out[0].cells[0].members, (Ids{0, 1, 2}));
}

TEST(CoarsenLevel, SeparationDensityAndDiameterPerChunk) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = oracle::random_points(gen, 400, 2, 20.0);
    const double eps = 0.5 + 0.2 * trial;
    const auto out = coarsen_level(ds, level_cfg(eps, 64));
    double total = 0.0;
    for (const auto& oc : out) {
      ASSERT_TRUE(is_eps_separated(ds, oc.representatives, eps));
      ASSERT_TRUE(is_eps_dense(ds, oc.representatives, oc.chunk.member_ids, eps));
      for (const auto& cell : oc.cells) {
        total += cell.weight;
        for (auto m : cell.members) ASSERT_LT(ds.distance(m, cell.representative), eps);
        for (auto a : cell.members)
          for (auto b : cell.members) ASSERT_LE(ds.distance(a, b), 2.0 * eps);
      }
    }
    ASSERT_NEAR(total, ds.total_weight(), 1e-9 * ds.total_weight());
  }
}

TEST(CoarsenLevel, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 gen(5);
  const auto ds = oracle::random_points(gen, 3000, 2, 30.0);
  auto cfg = level_cfg(1.0, 100);
  cfg.seed = 17;
  const auto one = coarsen_level(ds, cfg);
  cfg.threads = 4;
  const auto four = coarsen_level(ds, cfg);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t c = 0; c < one.size(); ++c) {
    EXPECT_EQ(one[c].representatives, four[c].representatives);
    ASSERT_EQ(one[c].cells.size(), four[c].cells.size());
    for (std::size_t k = 0; k < one[c].cells.size(); ++k) EXPECT_EQ(one[c].cells[k].members, four[c].cells[k].members);
  }
}

TEST(BuildTree, SeparableFourPoints) {
  const WeightedDataset ds(1, {0, 1, 10, 11}, {1, 1, 1, 1});
  for (auto kind : {SolverKind::greedy, SolverKind::exact, SolverKind::anneal}) {
    TreeParams p;
    p.eps0 = 5.0;
    p.solver = solver(kind);
    const auto t = build_tree(ds, p);
    const auto l = labels_at_level(t, 1).labels;
    EXPECT_EQ(l[0], l[1]);
    EXPECT_EQ(l[2], l[3]);
    EXPECT_NE(l[0], l[2]);
  }
}

TEST(BuildTree, SingletonIsRootOnly) {
  const WeightedDataset ds(2, {1, 2}, {3});
  const auto t = build_tree(ds, TreeParams{});
  EXPECT_EQ(t.level_count(), 1U);
  EXPECT_EQ(t.root_id, 0U);
  EXPECT_EQ(t.status, TreeStatus::complete);
}

TEST(BuildTree, DuplicatesBecomeOneLeaf) {
  const WeightedDataset ds(1, {3, 3, 3}, {1, 1, 1});
  const auto t = build_tree(ds, TreeParams{});
  EXPECT_EQ(t.level_count(), 1U);
  EXPECT_EQ(t.nodes[0].weight, 3.0);
  EXPECT_EQ(t.point_leaf, (Ids{0, 0, 0}));
}

TEST(BuildTree, ValidatesParameters) {
  const WeightedDataset ds(1, {0, 1}, {1, 1});
  TreeParams p;
  p.eps0 = 0;
  EXPECT_THROW(build_tree(ds, p), ValidationError);
  p = TreeParams{};
  p.alpha = 1.0;
  EXPECT_THROW(build_tree(ds, p), ValidationError);
  p = TreeParams{};
  p.kappa = 1;
  EXPECT_THROW(build_tree(ds, p), ValidationError);
}

TEST(BuildTree, TruncatedWhenLevelsRunOut) {
  const WeightedDataset ds(1, {0, 100, 200}, {1, 1, 1});
  TreeParams p;
  p.max_levels = 2;
  const auto t = build_tree(ds, p);
  EXPECT_EQ(t.status, TreeStatus::truncated);
  EXPECT_EQ(t.root_id, ClusterTree::npos);
  EXPECT_EQ(t.level_count(), 3U);
}

TEST(BuildTree, InvariantsOnRandomData) {
  std::mt19937_64 gen(6);
  std::uniform_int_distribution<int> iw(1, 5), cell(0, 40);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> coords, weights;
    for (int i = 0; i < 600; ++i) {
      coords.push_back(cell(gen) * 0.5);
      coords.push_back(cell(gen) * 0.5);
      weights.push_back(iw(gen));
    }
    const WeightedDataset ds(2, coords, weights);
    TreeParams p;
    p.eps0 = 0.3;
    p.kappa = 50 + 20 * trial;
    p.seed = trial;
    p.use_centroids = trial % 2 == 0;
    const auto t = build_tree(ds, p);
    ASSERT_EQ(t.status, TreeStatus::complete);
    ASSERT_EQ(t.levels.back().size(), 1U);
    for (std::size_t l = 0; l < t.level_count(); ++l) {
      ASSERT_EQ(level_weight(t, l), ds.total_weight()) << "level " << l;
      if (l > 0) {
        ASSERT_LE(t.levels[l].size(), t.levels[l - 1].size());
        ASSERT_DOUBLE_EQ(t.level_epsilon[l], l == 1 ? 0.3 : t.level_epsilon[l - 1] * 1.3);
        for (auto id : t.levels[l]) {
          double w = 0.0;
          for (auto m : t.nodes[id].members) {
            ASSERT_EQ(t.nodes[m].level, l - 1);
            w += t.nodes[m].weight;
          }
          ASSERT_EQ(w, t.nodes[id].weight);
        }
      }
    }
    // Cluster ids are exactly the node ids of the level.
    for (std::size_t l = 0; l < t.level_count(); ++l) {
      const auto a = labels_at_level(t, l);
      std::set<std::size_t> used(a.labels.begin(), a.labels.end());
      ASSERT_EQ(used, std::set<std::size_t>(t.levels[l].begin(), t.levels[l].end()));
      ASSERT_EQ(a.n_clusters, t.levels[l].size());
    }
  }
}

TEST(BuildTree, SameSeedSameTree) {
  std::mt19937_64 gen(7);
  const auto ds = oracle::random_points(gen, 2000, 2, 40.0);
  TreeParams p;
  p.kappa = 200;
  p.seed = 5;
  const auto a = build_tree(ds, p);
  p.threads = 3;
  const auto b = build_tree(ds, p);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    ASSERT_EQ(a.nodes[i].members, b.nodes[i].members);
    ASSERT_EQ(a.nodes[i].coords, b.nodes[i].coords);
  }
}

TEST(Labels, HandTree) {
  const auto t = hand_tree();
  const auto l1 = labels_at_level(t, 1);
  EXPECT_NE(l1.labels[4], l1.labels[5]);
  EXPECT_EQ(l1.labels[0], l1.labels[1]);
  EXPECT_EQ(l1.n_clusters, 4U);
  const auto l2 = labels_at_level(t, 2);
  EXPECT_EQ(l2.labels[4], l2.labels[5]);
  EXPECT_EQ(l2.labels[5], l2.labels[6]);
  EXPECT_NE(l2.labels[0], l2.labels[4]);
}

TEST(Labels, LeafAndRootLevels) {
  const auto t = hand_tree();
  EXPECT_EQ(labels_at_level(t, 0).labels, (Ids{0, 1, 2, 3, 4, 5, 5}));
  const auto root = labels_at_level(t, 3);
  EXPECT_EQ(std::set<std::size_t>(root.labels.begin(), root.labels.end()), std::set<std::size_t>{t.root_id});
}

TEST(Labels, OutOfRangeNamesValidRange) {
  try {
    labels_at_level(hand_tree(), 4);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("[0, 3]"), std::string::npos);
  }
}

TEST(InitialRadius, CollapsesRoughlyTheTargetFraction) {
  std::mt19937_64 gen(8);
  const auto ds = oracle::random_points(gen, 4000, 2, 100.0, true);
  const double eps = estimate_initial_radius(ds, 0.1, 1);
  EXPECT_GT(eps, 0.0);
  LevelConfig cfg = level_cfg(eps, 1000);
  std::size_t after = 0;
  for (const auto& oc : coarsen_level(ds, cfg)) after += oc.cells.size();
  const double collapsed = 1.0 - static_cast<double>(after) / 4000.0;
  EXPECT_GT(collapsed, 0.04);
  EXPECT_LT(collapsed, 0.2);
}
