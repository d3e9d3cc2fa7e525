#include "epsclust/tree_io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "epsclust/error.hpp"

namespace epsclust {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormat = "epsclust-tree";
constexpr int kVersion = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string tree_to_json(const ClusterTree& tree) {
  const auto& p = tree.params;
  json params = {
      {"eps0", p.eps0},
      {"alpha", p.alpha},
      {"kappa", p.kappa},
      {"solver", std::string(to_string(p.solver.kind))},
      {"gamma", p.solver.gamma},
      {"sweeps", p.solver.sweeps},
      {"restarts", p.solver.restarts},
      {"reduce", p.solver.reduce},
      {"seed", p.seed},
      {"max_levels", p.max_levels},
      {"centroid_mode", p.use_centroids},
  };
  json meta = {
      {"params", params},
      {"dataset_hash", hex64(tree.dataset_hash)},
      {"dim", tree.dim},
      {"n_points", tree.point_leaf.size()},
      {"level_count", tree.level_count()},
      {"status", tree.status == TreeStatus::complete ? "complete" : "truncated"},
      {"root_id", tree.root_id == ClusterTree::npos ? json(nullptr) : json(tree.root_id)},
      {"level_epsilon", tree.level_epsilon},
  };
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back(json{
        {"id", n.id},
        {"level", n.level},
        {"coords", n.coords},
        {"weight", n.weight},
        {"member_ids", n.members},
    });
  }
  json doc = {
      {"format", kFormat},
      {"version", kVersion},
      {"metadata", std::move(meta)},
      {"point_leaf", tree.point_leaf},
      {"nodes", std::move(nodes)},
  };
  return doc.dump() + "\n";
}

ClusterTree tree_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("tree JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw InputError("not an epsclust tree document");
    if (doc.at("version").get<int>() != kVersion) throw InputError("unsupported tree document version");

    ClusterTree tree;
    const auto& meta = doc.at("metadata");
    const auto& params = meta.at("params");
    tree.params.eps0 = params.at("eps0").get<double>();
    tree.params.alpha = params.at("alpha").get<double>();
    tree.params.kappa = params.at("kappa").get<std::size_t>();
    tree.params.solver.kind = parse_solver(params.at("solver").get<std::string>());
    tree.params.solver.gamma = params.at("gamma").get<double>();
    tree.params.solver.sweeps = params.at("sweeps").get<std::size_t>();
    tree.params.solver.restarts = params.at("restarts").get<std::size_t>();
    tree.params.solver.reduce = params.at("reduce").get<bool>();
    tree.params.seed = params.at("seed").get<std::uint64_t>();
    tree.params.max_levels = params.at("max_levels").get<std::size_t>();
    tree.params.use_centroids = params.at("centroid_mode").get<bool>();
    tree.dataset_hash = std::stoull(meta.at("dataset_hash").get<std::string>(), nullptr, 16);
    tree.dim = meta.at("dim").get<std::size_t>();
    tree.status = meta.at("status").get<std::string>() == "complete" ? TreeStatus::complete
                                                                     : TreeStatus::truncated;
    tree.root_id = meta.at("root_id").is_null() ? ClusterTree::npos : meta.at("root_id").get<std::size_t>();
    tree.level_epsilon = meta.at("level_epsilon").get<std::vector<double>>();
    tree.point_leaf = doc.at("point_leaf").get<std::vector<std::size_t>>();

    const std::size_t level_count = meta.at("level_count").get<std::size_t>();
    tree.levels.resize(level_count);
    for (const auto& jn : doc.at("nodes")) {
      ClusterNode n;
      n.id = jn.at("id").get<std::size_t>();
      n.level = jn.at("level").get<std::size_t>();
      n.coords = jn.at("coords").get<std::vector<double>>();
      n.weight = jn.at("weight").get<double>();
      n.members = jn.at("member_ids").get<std::vector<std::size_t>>();
      if (n.id != tree.nodes.size()) throw InputError("tree JSON: node ids must be dense and ordered");
      if (n.level >= level_count) throw InputError("tree JSON: node level out of range");
      tree.levels[n.level].push_back(n.id);
      tree.nodes.push_back(std::move(n));
    }
    for (auto leaf : tree.point_leaf) {
      if (level_count == 0 || leaf >= tree.levels[0].size()) throw InputError("tree JSON: bad point_leaf entry");
    }
    for (const auto& n : tree.nodes) {
      for (auto m : n.members) {
        if (m >= tree.nodes.size()) throw InputError("tree JSON: member id out of range");
      }
    }
    tree.link_parents();
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("tree JSON: ") + e.what());
  }
}

void save_tree(const std::filesystem::path& path, const ClusterTree& tree) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << tree_to_json(tree);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

ClusterTree load_tree(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return tree_from_json(buf.str());
}

}  // namespace epsclust
