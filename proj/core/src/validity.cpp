#include "epsclust/validity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "epsclust/error.hpp"

namespace epsclust {

std::string_view to_string(ScoreKind kind) noexcept {
  return kind == ScoreKind::calinski_harabasz ? "calinski_harabasz" : "davies_bouldin";
}

namespace {

struct Clusters {
  std::vector<std::size_t> index;  // point -> dense cluster index
  std::vector<std::size_t> size;
  std::vector<double> centroid;    // k × dim
  std::size_t k = 0;
};

Clusters group(const WeightedDataset& ds, std::span<const std::size_t> labels) {
  if (labels.size() != ds.size()) {
    throw ValidationError("label count " + std::to_string(labels.size()) + " does not match point count " +
                          std::to_string(ds.size()));
  }
  Clusters c;
  std::map<std::size_t, std::size_t> dense;
  c.index.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = dense.try_emplace(labels[i], dense.size());
    c.index[i] = it->second;
  }
  c.k = dense.size();
  const std::size_t dim = ds.dim();
  c.size.assign(c.k, 0);
  c.centroid.assign(c.k * dim, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto k = c.index[i];
    ++c.size[k];
    auto x = ds.coords(i);
    for (std::size_t a = 0; a < dim; ++a) c.centroid[k * dim + a] += x[a];
  }
  for (std::size_t k = 0; k < c.k; ++k) {
    for (std::size_t a = 0; a < dim; ++a) c.centroid[k * dim + a] /= static_cast<double>(c.size[k]);
  }
  return c;
}

double sq_dist(const double* x, const double* y, std::size_t dim) {
  double s = 0.0;
  for (std::size_t a = 0; a < dim; ++a) {
    const double d = x[a] - y[a];
    s += d * d;
  }
  return s;
}

}  // namespace

ScoreReport calinski_harabasz(const WeightedDataset& ds, std::span<const std::size_t> labels) {
  const Clusters c = group(ds, labels);
  const std::size_t n = ds.size();
  if (c.k < 2 || c.k >= n) {
    throw UndefinedScoreError("calinski_harabasz requires 2 <= clusters < points (got " + std::to_string(c.k) +
                              " clusters, " + std::to_string(n) + " points)");
  }
  const std::size_t dim = ds.dim();
  std::vector<double> mean(dim, 0.0);
  for (std::size_t k = 0; k < c.k; ++k) {
    for (std::size_t a = 0; a < dim; ++a) mean[a] += c.centroid[k * dim + a];
  }
  for (auto& m : mean) m /= static_cast<double>(c.k);

  double between = 0.0;
  for (std::size_t k = 0; k < c.k; ++k) {
    between += static_cast<double>(c.size[k]) * sq_dist(&c.centroid[k * dim], mean.data(), dim);
  }
  double within = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    within += sq_dist(ds.coords(i).data(), &c.centroid[c.index[i] * dim], dim);
  }
  if (within == 0.0) throw UndefinedScoreError("calinski_harabasz: within-cluster dispersion is zero");
  const double value =
      (static_cast<double>(n - 1) / static_cast<double>(c.k - 1)) * (between / within);
  return {ScoreKind::calinski_harabasz, value, c.k, n};
}

ScoreReport davies_bouldin(const WeightedDataset& ds, std::span<const std::size_t> labels) {
  const Clusters c = group(ds, labels);
  const std::size_t n = ds.size();
  if (c.k < 2) {
    throw UndefinedScoreError("davies_bouldin requires at least 2 clusters (got " + std::to_string(c.k) + ")");
  }
  const std::size_t dim = ds.dim();
  std::vector<double> spread(c.k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    spread[c.index[i]] += std::sqrt(sq_dist(ds.coords(i).data(), &c.centroid[c.index[i] * dim], dim));
  }
  for (std::size_t k = 0; k < c.k; ++k) spread[k] /= static_cast<double>(c.size[k]);

  double total = 0.0;
  for (std::size_t k = 0; k < c.k; ++k) {
    double worst = 0.0;
    for (std::size_t j = 0; j < c.k; ++j) {
      if (j == k) continue;
      const double sep = std::sqrt(sq_dist(&c.centroid[k * dim], &c.centroid[j * dim], dim));
      if (sep == 0.0) throw UndefinedScoreError("davies_bouldin: coincident cluster centroids");
      worst = std::max(worst, (spread[k] + spread[j]) / sep);
    }
    total += worst;
  }
  return {ScoreKind::davies_bouldin, total / static_cast<double>(c.k), c.k, n};
}

}  // namespace epsclust
