#include <gtest/gtest.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>

#include "epsclust/error.hpp"
#include "epsclust/tree_io.hpp"
#include "oracles.hpp"

using namespace epsclust;

namespace {

ClusterTree sample_tree(std::size_t max_levels = 64) {
  std::mt19937_64 gen(1);
  const auto ds = oracle::random_points(gen, 300, 2, 20.0);
  TreeParams p;
  p.eps0 = 0.7;
  p.kappa = 64;
  p.seed = 3;
  p.max_levels = max_levels;
  return build_tree(ds, p);
}

}  // namespace

TEST(TreeJson, RoundTripIsLossless) {
  const auto t = sample_tree();
  const auto text = tree_to_json(t);
  const auto back = tree_from_json(text);
  EXPECT_EQ(tree_to_json(back), text);
  EXPECT_EQ(back.levels, t.levels);
  EXPECT_EQ(back.parent, t.parent);
  EXPECT_EQ(back.root_id, t.root_id);
  EXPECT_EQ(back.point_leaf, t.point_leaf);
  for (std::size_t l = 0; l < t.level_count(); ++l)
    EXPECT_EQ(labels_at_level(back, l).labels, labels_at_level(t, l).labels);
}

TEST(TreeJson, Schema) {
  const auto doc = nlohmann::json::parse(tree_to_json(sample_tree()));
  EXPECT_EQ(doc.at("format"), "epsclust-tree");
  EXPECT_EQ(doc.at("version"), 1);
  const auto& meta = doc.at("metadata");
  EXPECT_EQ(meta.at("status"), "complete");
  EXPECT_EQ(meta.at("params").at("kappa"), 64);
  EXPECT_EQ(meta.at("dataset_hash").get<std::string>().size(), 16U);
  EXPECT_EQ(meta.at("n_points"), 300);
  const auto& node = doc.at("nodes").at(0);
  for (const char* key : {"id", "level", "coords", "weight", "member_ids"}) EXPECT_TRUE(node.contains(key)) << key;
}

TEST(TreeJson, TruncatedHasNullRoot) {
  const auto t = sample_tree(1);
  ASSERT_EQ(t.status, TreeStatus::truncated);
  const auto doc = nlohmann::json::parse(tree_to_json(t));
  EXPECT_TRUE(doc.at("metadata").at("root_id").is_null());
  EXPECT_EQ(tree_from_json(doc.dump()).status, TreeStatus::truncated);
}

TEST(TreeJson, RejectsBrokenDocuments) {
  EXPECT_THROW(tree_from_json("{"), InputError);
  EXPECT_THROW(tree_from_json("{\"format\":\"other\"}"), InputError);
  auto doc = nlohmann::json::parse(tree_to_json(sample_tree()));
  doc["nodes"][5]["member_ids"] = {999999};
  EXPECT_THROW(tree_from_json(doc.dump()), InputError);
}

TEST(TreeJson, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "epsclust_tree_io_test.json";
  const auto t = sample_tree();
  save_tree(path, t);
  const auto back = load_tree(path);
  std::filesystem::remove(path);
  EXPECT_EQ(tree_to_json(back), tree_to_json(t));
  EXPECT_THROW(load_tree(path), InputError);
}
