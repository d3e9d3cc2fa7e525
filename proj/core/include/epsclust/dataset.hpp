#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epsclust {

enum class Metric { euclidean, manhattan, chebyshev };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric m) noexcept;

/// Distance between two coordinate vectors. Throws ValidationError on a
/// dimension mismatch.
double distance(Metric metric, std::span<const double> x, std::span<const double> y);

/// Unchecked variant for inner loops; both spans must have equal length.
double distance_unchecked(Metric metric, const double* x, const double* y, std::size_t dim) noexcept;

struct WeightedPoint {
  std::size_t id = 0;
  std::vector<double> coords;
  double weight = 1.0;
};

/// Immutable set of d-dimensional points with positive weights.
///
/// Coordinates are stored row-major in one contiguous buffer; point ids are
/// row indices.
class WeightedDataset {
public:
  WeightedDataset() = default;

  /// Takes ownership of a row-major coordinate buffer. Validates that
  /// `coords.size() == weights.size() * dim`, every weight is finite and
  /// positive, and every coordinate is finite.
  WeightedDataset(std::size_t dim, std::vector<double> coords, std::vector<double> weights,
                  Metric metric = Metric::euclidean);

  static WeightedDataset from_points(std::size_t dim, const std::vector<WeightedPoint>& points,
                                     Metric metric = Metric::euclidean);

  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  Metric metric() const noexcept { return metric_; }

  std::span<const double> coords(std::size_t id) const noexcept {
    return {coords_.data() + id * dim_, dim_};
  }
  double coord(std::size_t id, std::size_t axis) const noexcept { return coords_[id * dim_ + axis]; }
  double weight(std::size_t id) const noexcept { return weights_[id]; }

  std::span<const double> coord_buffer() const noexcept { return coords_; }
  std::span<const double> weights() const noexcept { return weights_; }

  WeightedPoint point(std::size_t id) const;

  double distance(std::size_t a, std::size_t b) const noexcept {
    return distance_unchecked(metric_, coords_.data() + a * dim_, coords_.data() + b * dim_, dim_);
  }

  /// ω(X): sum of all weights.
  double total_weight() const noexcept;

  /// FNV-1a hash over dimension, coordinates and weights (bit patterns).
  std::uint64_t content_hash() const noexcept;

private:
  std::size_t dim_ = 0;
  Metric metric_ = Metric::euclidean;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

struct CsvOptions {
  /// Column holding point weights; weights default to 1 when absent.
  std::optional<std::string> weight_column;
  /// Columns skipped entirely (e.g. ground-truth labels).
  std::vector<std::string> ignore_columns;
  Metric metric = Metric::euclidean;
};

/// Reads a numeric CSV. A header is detected when any field of the first
/// row fails to parse as a number. Selecting columns by name requires a
/// header.
WeightedDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
WeightedDataset parse_csv(std::string_view text, const CsvOptions& options = {});

struct DedupeResult {
  WeightedDataset data;
  /// Maps each input id to the id of its representative in `data`.
  std::vector<std::size_t> representative;
};

/// Merges points with identical coordinates. The representative of each
/// group is its smallest id and carries the group's summed weight; output
/// ids follow the order of first appearance. -0.0 and +0.0 compare equal.
DedupeResult dedupe_with_map(const WeightedDataset& ds);

inline WeightedDataset dedupe(const WeightedDataset& ds) { return dedupe_with_map(ds).data; }

}  // namespace epsclust
