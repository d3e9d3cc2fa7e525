#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "epsclust/coarsen.hpp"

namespace epsclust {

/// Serialises a tree as a JSON document: metadata (parameters, dataset
/// hash, level count, status), the point-to-leaf map, and a flat node
/// array of {id, level, coords, weight, member_ids}. The output is a pure
/// function of the tree; worker count and timings are not recorded.
std::string tree_to_json(const ClusterTree& tree);
ClusterTree tree_from_json(const std::string& text);

void save_tree(const std::filesystem::path& path, const ClusterTree& tree);
ClusterTree load_tree(const std::filesystem::path& path);

}  // namespace epsclust
