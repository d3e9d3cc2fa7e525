#include "epsclust/partition.hpp"

#include <algorithm>

#include "epsclust/error.hpp"

namespace epsclust {

std::size_t max_variance_axis(const WeightedDataset& ds, std::span<const std::size_t> ids) {
  const std::size_t dim = ds.dim();
  std::vector<double> mean(dim, 0.0);
  for (auto id : ids) {
    auto x = ds.coords(id);
    for (std::size_t k = 0; k < dim; ++k) mean[k] += x[k];
  }
  for (auto& m : mean) m /= static_cast<double>(ids.size());

  std::vector<double> var(dim, 0.0);
  for (auto id : ids) {
    auto x = ds.coords(id);
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = x[k] - mean[k];
      var[k] += d * d;
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < dim; ++k) {
    if (var[k] > var[best]) best = k;
  }
  return best;
}

namespace {

// Reorders `ids` in place so that [0, ceil(n/2)) is the lower half.
void median_cut(const WeightedDataset& ds, std::span<std::size_t> ids) {
  const std::size_t axis = max_variance_axis(ds, ids);
  const std::size_t half = (ids.size() + 1) / 2;
  auto less = [&](std::size_t a, std::size_t b) {
    const double xa = ds.coord(a, axis);
    const double xb = ds.coord(b, axis);
    return xa < xb || (xa == xb && a < b);
  };
  std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(half - 1), ids.end(), less);
}

}  // namespace

std::pair<Chunk, Chunk> split_chunk(const WeightedDataset& ds, const Chunk& chunk) {
  if (chunk.size() < 2) throw ValidationError("split_chunk: chunk must have at least 2 members");
  std::vector<std::size_t> ids = chunk.member_ids;
  median_cut(ds, ids);
  const auto mid = ids.begin() + static_cast<std::ptrdiff_t>((ids.size() + 1) / 2);
  Chunk lower{std::vector<std::size_t>(ids.begin(), mid)};
  Chunk upper{std::vector<std::size_t>(mid, ids.end())};
  std::sort(lower.member_ids.begin(), lower.member_ids.end());
  std::sort(upper.member_ids.begin(), upper.member_ids.end());
  return {std::move(lower), std::move(upper)};
}

std::vector<Chunk> partition(const WeightedDataset& ds, std::vector<std::size_t> node_ids,
                             const PartitionConfig& cfg) {
  if (cfg.kappa < 1) throw ValidationError("partition: kappa must be at least 1");
  std::vector<Chunk> out;
  if (node_ids.empty()) return out;

  struct Range {
    std::size_t begin, end;
  };
  std::vector<Range> stack{{0, node_ids.size()}};
  while (!stack.empty()) {
    const Range r = stack.back();
    stack.pop_back();
    const std::size_t n = r.end - r.begin;
    if (n <= cfg.kappa) {
      Chunk c{std::vector<std::size_t>(node_ids.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                       node_ids.begin() + static_cast<std::ptrdiff_t>(r.end))};
      std::sort(c.member_ids.begin(), c.member_ids.end());
      out.push_back(std::move(c));
      continue;
    }
    median_cut(ds, std::span<std::size_t>(node_ids).subspan(r.begin, n));
    const std::size_t mid = r.begin + (n + 1) / 2;
    stack.push_back({mid, r.end});
    stack.push_back({r.begin, mid});
  }
  return out;
}

}  // namespace epsclust
