#include "epsclust/mwis.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

#include "epsclust/error.hpp"

namespace epsclust {

IndependentSet greedy_mwis(const NeighborhoodGraph& g, Rng& rng) {
  const std::size_t n = g.size();
  std::vector<char> alive(n, 1);
  std::vector<double> nbr_weight(n, 0.0);   // ω(N_v ∩ candidates)
  std::vector<std::size_t> nbr_count(n, 0);  // |N_v ∩ candidates|
  for (std::size_t v = 0; v < n; ++v) {
    for (auto u : g.neighbors(v)) nbr_weight[v] += g.weight(u);
    nbr_count[v] = g.degree(v);
  }

  IndependentSet out;
  std::vector<std::size_t> ties;
  std::vector<std::size_t> removed;
  std::size_t remaining = n;
  while (remaining > 0) {
    ties.clear();
    double best = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      const double deg = nbr_weight[v] / g.weight(v);
      if (ties.empty() || deg < best) {
        best = deg;
        ties.assign(1, v);
      } else if (deg == best) {
        ties.push_back(v);
      }
    }
    const std::size_t x = ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
    out.vertices.push_back(x);
    out.total_weight += g.weight(x);

    removed.clear();
    removed.push_back(x);
    for (auto u : g.neighbors(x)) {
      if (alive[u]) removed.push_back(u);
    }
    for (auto r : removed) alive[r] = 0;
    remaining -= removed.size();
    for (auto r : removed) {
      for (auto t : g.neighbors(r)) {
        if (!alive[t]) continue;
        // Exact zero once isolated so rounding never breaks ties between
        // isolated vertices.
        if (--nbr_count[t] == 0) {
          nbr_weight[t] = 0.0;
        } else {
          nbr_weight[t] -= g.weight(r);
        }
      }
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

namespace {

// Branch and bound over 32-bit vertex masks. Vertices are decided in index
// order, include-branch first, and an incumbent is replaced only by a
// strictly heavier set; this yields the lexicographically smallest optimum.
class MaskSolver {
public:
  MaskSolver(std::vector<std::uint32_t> nbr, std::vector<double> weight)
      : nbr_(std::move(nbr)), weight_(std::move(weight)) {}

  std::uint32_t solve() {
    const std::uint32_t all =
        nbr_.size() == 32 ? ~0U : static_cast<std::uint32_t>((std::uint64_t{1} << nbr_.size()) - 1);
    best_mask_ = 0;
    best_weight_ = -1.0;
    recurse(all, 0U, 0.0);
    return best_mask_;
  }

private:
  double mask_weight(std::uint32_t m) const {
    double s = 0.0;
    while (m) {
      s += weight_[static_cast<std::size_t>(std::countr_zero(m))];
      m &= m - 1;
    }
    return s;
  }

  void recurse(std::uint32_t cand, std::uint32_t chosen, double w) {
    if (cand == 0) {
      if (w > best_weight_) {
        best_weight_ = w;
        best_mask_ = chosen;
      }
      return;
    }
    if (w + mask_weight(cand) <= best_weight_) return;
    const auto v = static_cast<std::size_t>(std::countr_zero(cand));
    const std::uint32_t bit = 1U << v;
    recurse(cand & ~bit & ~nbr_[v], chosen | bit, w + weight_[v]);
    // Excluding v is only useful if some neighbour of v can still be taken;
    // otherwise adding v back would improve the set.
    if ((cand & nbr_[v]) != 0) recurse(cand & ~bit, chosen, w);
  }

  std::vector<std::uint32_t> nbr_;
  std::vector<double> weight_;
  std::uint32_t best_mask_ = 0;
  double best_weight_ = -1.0;
};

IndependentSet solve_subset(const NeighborhoodGraph& g, const std::vector<std::size_t>& vertices) {
  const std::size_t k = vertices.size();
  std::vector<std::uint32_t> nbr(k, 0);
  std::vector<double> weight(k);
  for (std::size_t a = 0; a < k; ++a) {
    weight[a] = g.weight(vertices[a]);
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b && g.adjacent(vertices[a], vertices[b])) nbr[a] |= 1U << b;
    }
  }
  MaskSolver solver(std::move(nbr), std::move(weight));
  std::uint32_t mask = solver.solve();
  IndependentSet out;
  while (mask) {
    const auto a = static_cast<std::size_t>(std::countr_zero(mask));
    out.vertices.push_back(vertices[a]);
    mask &= mask - 1;
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  for (auto v : out.vertices) out.total_weight += g.weight(v);
  return out;
}

}  // namespace

IndependentSet exact_mwis(const NeighborhoodGraph& g) {
  if (g.size() > kExactMwisLimit) {
    throw SizeLimitError("exact_mwis: " + std::to_string(g.size()) + " vertices exceeds the limit of " +
                         std::to_string(kExactMwisLimit) + "; use the greedy or anneal solver");
  }
  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return solve_subset(g, all);
}

IndependentSet exact_mwis_by_components(const NeighborhoodGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    const std::size_t c = components.size();
    components.emplace_back();
    comp[s] = c;
    stack.assign(1, s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      components[c].push_back(v);
      for (auto u : g.neighbors(v)) {
        if (comp[u] == n) {
          comp[u] = c;
          stack.push_back(u);
        }
      }
    }
  }
  for (const auto& c : components) {
    if (c.size() > kExactMwisLimit) {
      throw SizeLimitError("exact solver: connected component with " + std::to_string(c.size()) +
                           " vertices exceeds the limit of " + std::to_string(kExactMwisLimit) +
                           "; use the greedy or anneal solver or reduce kappa");
    }
  }
  IndependentSet out;
  for (auto& c : components) {
    std::sort(c.begin(), c.end());
    if (c.size() == 1) {
      out.vertices.push_back(c.front());
      continue;
    }
    auto part = solve_subset(g, c);
    out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  for (auto v : out.vertices) out.total_weight += g.weight(v);
  return out;
}

bool is_independent(const NeighborhoodGraph& g, std::span<const std::size_t> vertices) {
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (g.adjacent(vertices[a], vertices[b])) return false;
    }
  }
  return true;
}

bool is_maximal_independent(const NeighborhoodGraph& g, std::span<const std::size_t> vertices) {
  if (!is_independent(g, vertices)) return false;
  std::vector<char> blocked(g.size(), 0);
  for (auto v : vertices) {
    blocked[v] = 1;
    for (auto u : g.neighbors(v)) blocked[u] = 1;
  }
  return std::all_of(blocked.begin(), blocked.end(), [](char b) { return b != 0; });
}

bool is_eps_separated(const WeightedDataset& ds, std::span<const std::size_t> ids, double epsilon) {
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      if (ds.distance(ids[a], ids[b]) < epsilon) return false;
    }
  }
  return true;
}

bool is_eps_dense(const WeightedDataset& ds, std::span<const std::size_t> ids,
                  std::span<const std::size_t> universe, double epsilon) {
  for (auto x : universe) {
    bool covered = false;
    for (auto y : ids) {
      if (ds.distance(x, y) < epsilon) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace epsclust
