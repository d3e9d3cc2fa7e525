#include <gtest/gtest.h>

#include <random>

#include "epsclust/error.hpp"
#include "epsclust/graph.hpp"
#include "oracles.hpp"

using namespace epsclust;

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

NeighborhoodGraph path3(std::vector<double> w = {1, 1, 1}) {
  return NeighborhoodGraph::from_edges(std::move(w), {{0, 1}, {1, 2}});
}

}  // namespace

TEST(BuildGraph, LinePointsOneAndAHalf) {
  const WeightedDataset ds(1, {1, 2, 3, 4}, {1, 1, 1, 1});
  const auto g = build_graph(ds, oracle::all_of(ds), 1.5);
  EXPECT_EQ(g.edges(), (Edges{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(BuildGraph, SmallEpsilonIsEdgeless) {
  std::mt19937_64 rng(1);
  const auto ds = oracle::random_points(rng, 40, 2, 10.0);
  double dmin = 1e300;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j) dmin = std::min(dmin, ds.distance(i, j));
  EXPECT_EQ(build_graph(ds, oracle::all_of(ds), dmin).edge_count(), 0U);
}

TEST(BuildGraph, DistanceExactlyEpsilonIsNotAnEdge) {
  const WeightedDataset ds(2, {0, 0, 3, 4}, {1, 1});
  EXPECT_EQ(build_graph(ds, oracle::all_of(ds), 5.0).edge_count(), 0U);
  EXPECT_EQ(build_graph(ds, oracle::all_of(ds), std::nextafter(5.0, 6.0)).edge_count(), 1U);
}

TEST(BuildGraph, RejectsDuplicatesAndBadEpsilon) {
  const WeightedDataset ds(1, {1, 1}, {1, 1});
  EXPECT_THROW(build_graph(ds, oracle::all_of(ds), 1.0), ValidationError);
  const WeightedDataset ok(1, {1, 2}, {1, 1});
  EXPECT_THROW(build_graph(ok, oracle::all_of(ok), 0.0), ValidationError);
}

TEST(BuildGraph, CarriesWeightsAndIds) {
  const WeightedDataset ds(1, {0, 5, 9, 1}, {1, 2, 3, 4});
  const auto g = build_graph(ds, Chunk{{1, 3}}, 10.0);
  ASSERT_EQ(g.size(), 2U);
  EXPECT_EQ(g.weight(0), 2.0);
  EXPECT_EQ(g.weight(1), 4.0);
  EXPECT_EQ(g.vertex_ids()[1], 3U);
  EXPECT_TRUE(g.adjacent(0, 1));
}

TEST(BuildGraph, SymmetricAndMatchesDistances) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = oracle::random_points(rng, 60, 1 + trial % 4, 10.0);
    const double eps = 1.0 + trial % 5;
    const auto g = build_graph(ds, oracle::all_of(ds), eps);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_FALSE(g.adjacent(i, i));
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (i == j) continue;
        ASSERT_EQ(g.adjacent(i, j), g.adjacent(j, i));
        ASSERT_EQ(g.adjacent(i, j), ds.distance(i, j) < eps);
      }
    }
  }
}

TEST(BuildGraph, EdgeSetsGrowWithEpsilon) {
  std::mt19937_64 rng(3);
  const auto ds = oracle::random_points(rng, 80, 3, 10.0);
  const auto chunk = oracle::all_of(ds);
  double eps = 0.5;
  auto prev = build_graph(ds, chunk, eps).edges();
  for (int step = 0; step < 12; ++step) {
    eps *= 1.3;
    const auto next = build_graph(ds, chunk, eps).edges();
    ASSERT_TRUE(std::includes(next.begin(), next.end(), prev.begin(), prev.end()));
    prev = next;
  }
}

TEST(FromEdges, RejectsSelfLoopsAndBadWeights) {
  EXPECT_THROW(NeighborhoodGraph::from_edges({1, 1}, {{0, 0}}), ValidationError);
  EXPECT_THROW(NeighborhoodGraph::from_edges({1, 0}, {}), ValidationError);
  EXPECT_THROW(NeighborhoodGraph::from_edges({1, 1}, {{0, 2}}), ValidationError);
}

TEST(WeightedDegree, Path) {
  const auto g = path3();
  EXPECT_DOUBLE_EQ(weighted_degree(g, 1), 2.0);
  EXPECT_DOUBLE_EQ(weighted_degree(g, 0), 1.0);
}

TEST(WeightedDegree, IsolatedVertexIsZero) {
  const auto g = NeighborhoodGraph::from_edges({1, 2}, {});
  EXPECT_EQ(weighted_degree(g, 0), 0.0);
}

TEST(WeightedDegree, StarCenter) {
  const auto g = NeighborhoodGraph::from_edges({2, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_DOUBLE_EQ(weighted_degree(g, 0), 1.5);
}

TEST(WeightedDegree, MatchesBruteForceNeighbourhoodSum) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 15, 0.3);
    for (std::size_t v = 0; v < g.size(); ++v) {
      double s = 0.0;
      for (std::size_t u = 0; u < g.size(); ++u)
        if (u != v && g.adjacent(u, v)) s += g.weight(u);
      ASSERT_NEAR(weighted_degree(g, v), s / g.weight(v), 1e-12);
    }
  }
}

TEST(AverageWeightedDegree, Examples) {
  EXPECT_EQ(average_weighted_degree(NeighborhoodGraph::from_edges({1, 1, 1}, {})), 0.0);
  EXPECT_DOUBLE_EQ(average_weighted_degree(path3()), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(average_weighted_degree(NeighborhoodGraph::from_edges({1, 1}, {{0, 1}})), 1.0);
}
