#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "epsclust/dataset.hpp"

namespace epsclust {

/// Block of the homogeneous partition: distinct ids into a WeightedDataset.
struct Chunk {
  std::vector<std::size_t> member_ids;

  std::size_t size() const noexcept { return member_ids.size(); }
};

struct PartitionConfig {
  std::size_t kappa = 1000;  ///< maximum chunk cardinality
};

/// Index of the coordinate axis with maximum variance over `ids`; ties go
/// to the lowest axis.
std::size_t max_variance_axis(const WeightedDataset& ds, std::span<const std::size_t> ids);

/// Median cut along the axis of maximum variance. The first chunk receives
/// ceil(n/2) members, the second floor(n/2); members are ordered by
/// (coordinate, id) so points equal to the median fill the lower side first.
/// Output member lists are sorted by id.
std::pair<Chunk, Chunk> split_chunk(const WeightedDataset& ds, const Chunk& chunk);

/// Recursively bisects `node_ids` until every chunk holds at most kappa
/// members. Chunks are returned in depth-first, lower-half-first order.
std::vector<Chunk> partition(const WeightedDataset& ds, std::vector<std::size_t> node_ids,
                             const PartitionConfig& cfg);

}  // namespace epsclust
