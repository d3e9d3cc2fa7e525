#include "epsclust/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "epsclust/error.hpp"

namespace epsclust {

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "manhattan") return Metric::manhattan;
  if (name == "chebyshev") return Metric::chebyshev;
  throw ValidationError("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::manhattan: return "manhattan";
    case Metric::chebyshev: return "chebyshev";
  }
  return "euclidean";
}

double distance_unchecked(Metric metric, const double* x, const double* y, std::size_t dim) noexcept {
  switch (metric) {
    case Metric::manhattan: {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += std::abs(x[k] - y[k]);
      return s;
    }
    case Metric::chebyshev: {
      double m = 0.0;
      for (std::size_t k = 0; k < dim; ++k) m = std::max(m, std::abs(x[k] - y[k]));
      return m;
    }
    case Metric::euclidean:
    default: {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = x[k] - y[k];
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
}

double distance(Metric metric, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("distance: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  return distance_unchecked(metric, x.data(), y.data(), x.size());
}

WeightedDataset::WeightedDataset(std::size_t dim, std::vector<double> coords,
                                 std::vector<double> weights, Metric metric)
    : dim_(dim), metric_(metric), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim_ == 0) throw ValidationError("dataset dimension must be positive");
  if (coords_.size() != weights_.size() * dim_) {
    throw ValidationError("coordinate buffer size does not match point count times dimension");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw ValidationError("point " + std::to_string(i) + ": weight must be positive and finite");
    }
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw ValidationError("point " + std::to_string(i / dim_) + ": non-finite coordinate");
    }
  }
}

WeightedDataset WeightedDataset::from_points(std::size_t dim, const std::vector<WeightedPoint>& points,
                                             Metric metric) {
  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(points.size() * dim);
  weights.reserve(points.size());
  for (const auto& p : points) {
    if (p.coords.size() != dim) {
      throw ValidationError("point " + std::to_string(p.id) + ": expected " + std::to_string(dim) +
                            " coordinates, got " + std::to_string(p.coords.size()));
    }
    coords.insert(coords.end(), p.coords.begin(), p.coords.end());
    weights.push_back(p.weight);
  }
  return WeightedDataset(dim, std::move(coords), std::move(weights), metric);
}

WeightedPoint WeightedDataset::point(std::size_t id) const {
  auto c = coords(id);
  return WeightedPoint{id, std::vector<double>(c.begin(), c.end()), weights_[id]};
}

double WeightedDataset::total_weight() const noexcept {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t WeightedDataset::content_hash() const noexcept {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, dim_);
  fnv_mix(h, static_cast<std::uint64_t>(metric_));
  for (double c : coords_) fnv_mix(h, std::bit_cast<std::uint64_t>(c));
  for (double w : weights_) fnv_mix(h, std::bit_cast<std::uint64_t>(w));
  return h;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) return std::nullopt;
  return value;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

WeightedDataset parse_csv(std::string_view text, const CsvOptions& options) {
  // Strip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::size_t start = 0;
    std::size_t row = 0;
    while (start <= text.size()) {
      const auto pos = text.find('\n', start);
      auto line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
      ++row;
      if (!trim(line).empty()) lines.emplace_back(row, line);
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  }
  if (lines.empty()) throw ValidationError("input contains no data rows");

  auto first_fields = split_fields(lines.front().second);
  bool has_header = false;
  for (auto f : first_fields) {
    if (!parse_number(f)) {
      has_header = true;
      break;
    }
  }

  const std::size_t n_cols = first_fields.size();
  std::vector<bool> skip(n_cols, false);
  std::optional<std::size_t> weight_col;
  if (has_header) {
    std::vector<std::string> names;
    for (auto f : first_fields) names.push_back(unquote(f));
    auto find_col = [&](const std::string& name) -> std::size_t {
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw ValidationError("column '" + name + "' not found in header");
      return static_cast<std::size_t>(it - names.begin());
    };
    if (options.weight_column) weight_col = find_col(*options.weight_column);
    for (const auto& name : options.ignore_columns) skip[find_col(name)] = true;
  } else if (options.weight_column || !options.ignore_columns.empty()) {
    throw ValidationError("column selection by name requires a header row");
  }
  if (weight_col) skip[*weight_col] = true;

  std::size_t dim = 0;
  for (std::size_t c = 0; c < n_cols; ++c) dim += skip[c] ? 0 : 1;
  if (dim == 0) throw ValidationError("no coordinate columns remain");

  std::vector<double> coords;
  std::vector<double> weights;
  const std::size_t first_data = has_header ? 1 : 0;
  coords.reserve((lines.size() - first_data) * dim);
  weights.reserve(lines.size() - first_data);
  for (std::size_t li = first_data; li < lines.size(); ++li) {
    const auto [row, line] = lines[li];
    auto fields = split_fields(line);
    if (fields.size() != n_cols) {
      throw ParseError(row, "expected " + std::to_string(n_cols) + " fields, got " +
                                std::to_string(fields.size()));
    }
    double w = 1.0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (skip[c] && !(weight_col && c == *weight_col)) continue;
      auto v = parse_number(fields[c]);
      if (!v) throw ParseError(row, "non-numeric value '" + std::string(fields[c]) + "'");
      if (!std::isfinite(*v)) throw ParseError(row, "non-finite value");
      if (weight_col && c == *weight_col) {
        w = *v;
      } else {
        coords.push_back(*v);
      }
    }
    if (!(w > 0.0)) throw ValidationError("row " + std::to_string(row) + ": weight must be positive");
    weights.push_back(w);
  }
  if (weights.empty()) throw ValidationError("input contains no data rows");
  return WeightedDataset(dim, std::move(coords), std::move(weights), options.metric);
}

WeightedDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

// ---------------------------------------------------------------------------
// dedupe

namespace {

struct RowKey {
  const double* data;
  std::size_t dim;
};

struct RowHash {
  std::size_t operator()(const RowKey& k) const noexcept {
    std::uint64_t h = kFnvOffset;
    for (std::size_t i = 0; i < k.dim; ++i) {
      const double v = k.data[i] == 0.0 ? 0.0 : k.data[i];
      fnv_mix(h, std::bit_cast<std::uint64_t>(v));
    }
    return static_cast<std::size_t>(h);
  }
};

struct RowEq {
  bool operator()(const RowKey& a, const RowKey& b) const noexcept {
    return std::equal(a.data, a.data + a.dim, b.data);
  }
};

}  // namespace

DedupeResult dedupe_with_map(const WeightedDataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t dim = ds.dim();
  std::unordered_map<RowKey, std::size_t, RowHash, RowEq> first_seen;
  first_seen.reserve(n);

  DedupeResult out;
  out.representative.resize(n);
  std::vector<double> coords;
  std::vector<double> weights;
  for (std::size_t i = 0; i < n; ++i) {
    RowKey key{ds.coords(i).data(), dim};
    auto [it, inserted] = first_seen.try_emplace(key, weights.size());
    if (inserted) {
      for (double c : ds.coords(i)) coords.push_back(c == 0.0 ? 0.0 : c);
      weights.push_back(ds.weight(i));
    } else {
      weights[it->second] += ds.weight(i);
    }
    out.representative[i] = it->second;
  }
  if (n == 0) {
    out.data = ds;
    return out;
  }
  out.data = WeightedDataset(dim, std::move(coords), std::move(weights), ds.metric());
  return out;
}

}  // namespace epsclust
