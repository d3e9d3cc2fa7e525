#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "epsclust/dataset.hpp"

namespace epsclust {

enum class ScoreKind { calinski_harabasz, davies_bouldin };

std::string_view to_string(ScoreKind kind) noexcept;

struct ScoreReport {
  ScoreKind score = ScoreKind::calinski_harabasz;
  double value = 0.0;
  std::size_t n_clusters = 0;
  std::size_t n_points = 0;
};

// Both scores use unweighted points, cluster cardinalities, and Euclidean
// norms regardless of the dataset metric. Labels are arbitrary ids, one per
// point.

/// ((n-1)/(n_c-1)) · Σ|C_k|·‖c_k - c‖² / Σ_k Σ_{x∈C_k} ‖x - c_k‖², where c
/// is the mean of the cluster centroids. Throws UndefinedScoreError when
/// n_c < 2, n_c >= n, or the within-cluster dispersion is zero.
ScoreReport calinski_harabasz(const WeightedDataset& ds, std::span<const std::size_t> labels);

/// (1/n_c) · Σ_k max_{j≠k} (S_k + S_j) / ‖c_k - c_j‖ with S_i the mean
/// (non-squared) distance of C_i's points to c_i. Throws
/// UndefinedScoreError when n_c < 2 or two centroids coincide.
ScoreReport davies_bouldin(const WeightedDataset& ds, std::span<const std::size_t> labels);

}  // namespace epsclust
