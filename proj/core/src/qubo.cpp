#include "epsclust/qubo.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "epsclust/error.hpp"
#include "qubo_internal.hpp"

namespace epsclust {

QuboProblem QuboProblem::with_vars(std::size_t n, std::vector<VarOrigin> origin) {
  QuboProblem p;
  p.n_vars = n;
  p.source_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.source_index[i] = i;
  if (origin.empty()) {
    origin.resize(n);
    for (std::size_t i = 0; i < n; ++i) origin[i] = VarOrigin{VarOrigin::Kind::vertex, i, 0};
  }
  if (origin.size() != n) throw ValidationError("var_origin size does not match variable count");
  p.var_origin = std::move(origin);
  return p;
}

void QuboProblem::add_term(std::size_t i, std::size_t j, double value) {
  if (i >= n_vars || j >= n_vars) throw ValidationError("QUBO term index out of range");
  if (i > j) std::swap(i, j);
  coeffs[{i, j}] += value;
}

double QuboProblem::coeff(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  auto it = coeffs.find({i, j});
  return it == coeffs.end() ? 0.0 : it->second;
}

double QuboProblem::energy(std::span<const std::uint8_t> bits) const {
  if (bits.size() != n_vars) throw ValidationError("assignment length does not match QUBO size");
  double e = offset;
  for (const auto& [key, q] : coeffs) {
    if (bits[key.first] && bits[key.second]) e += q;
  }
  return e;
}

double QuboProblem::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& [key, q] : coeffs) m = std::max(m, std::abs(q));
  return m;
}

namespace detail {

DenseQubo::DenseQubo(const QuboProblem& p) : diag(p.n_vars, 0.0), adj(p.n_vars), offset(p.offset) {
  for (const auto& [key, q] : p.coeffs) {
    if (key.first == key.second) {
      diag[key.first] += q;
    } else if (q != 0.0) {
      adj[key.first].push_back({key.second, q});
      adj[key.second].push_back({key.first, q});
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// MWIS formulation and preprocessing

QuboProblem build_mwis_qubo_with_penalty(const NeighborhoodGraph& g,
                                         const std::function<double(double, double)>& penalty) {
  QuboProblem p = QuboProblem::with_vars(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p.add_term(i, i, -g.weight(i));
  for (auto [i, j] : g.edges()) p.add_term(i, j, penalty(g.weight(i), g.weight(j)));
  return p;
}

QuboProblem build_mwis_qubo(const NeighborhoodGraph& g, double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("build_mwis_qubo: gamma must be positive");
  return build_mwis_qubo_with_penalty(
      g, [gamma](double wi, double wj) { return (1.0 + gamma) * std::max(wi, wj); });
}

QuboProblem reduce_qubo(const QuboProblem& p) {
  std::vector<char> coupled(p.n_vars, 0);
  std::vector<double> diag(p.n_vars, 0.0);
  for (const auto& [key, q] : p.coeffs) {
    if (key.first == key.second) {
      diag[key.first] += q;
    } else if (q != 0.0) {
      coupled[key.first] = coupled[key.second] = 1;
    }
  }

  QuboProblem r;
  r.var_origin = p.var_origin;
  r.fixed = p.fixed;
  r.offset = p.offset;
  std::vector<std::size_t> new_index(p.n_vars, p.n_vars);
  for (std::size_t i = 0; i < p.n_vars; ++i) {
    if (!coupled[i] && diag[i] < 0.0) {
      r.fixed[p.source_index[i]] = 1;
      r.offset += diag[i];
    } else {
      new_index[i] = r.source_index.size();
      r.source_index.push_back(p.source_index[i]);
    }
  }
  r.n_vars = r.source_index.size();
  for (const auto& [key, q] : p.coeffs) {
    const auto a = new_index[key.first];
    const auto b = new_index[key.second];
    if (a == p.n_vars || b == p.n_vars) continue;
    r.coeffs[{a, b}] += q;
  }
  return r;
}

Bits restore_assignment(const QuboProblem& p, std::span<const std::uint8_t> residual_bits) {
  if (residual_bits.size() != p.n_vars) throw ValidationError("assignment length does not match QUBO size");
  Bits out(p.source_vars(), 0);
  for (const auto& [var, value] : p.fixed) out[var] = value;
  for (std::size_t i = 0; i < p.n_vars; ++i) out[p.source_index[i]] = residual_bits[i];
  return out;
}

std::vector<std::size_t> selected_vertices(const QuboProblem& p, std::span<const std::uint8_t> source_bits) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < source_bits.size() && i < p.var_origin.size(); ++i) {
    if (source_bits[i] && p.var_origin[i].kind == VarOrigin::Kind::vertex) out.push_back(p.var_origin[i].index);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Exact solvers

namespace {

// Relative slack when comparing incrementally accumulated energies; an
// incumbent is only replaced by a strictly better state.
double tie_tolerance(const detail::DenseQubo& q) {
  double scale = std::abs(q.offset);
  for (double d : q.diag) scale += std::abs(d);
  for (const auto& row : q.adj) {
    for (const auto& t : row) scale += std::abs(t.q) * 0.5;
  }
  return 1e-12 * (1.0 + scale);
}

}  // namespace

QuboSolution solve_qubo_exact(const QuboProblem& p) {
  const std::size_t n = p.n_vars;
  if (n > kExactQuboLimit) {
    throw SizeLimitError("solve_qubo_exact: " + std::to_string(n) + " variables exceeds the limit of " +
                         std::to_string(kExactQuboLimit));
  }
  const detail::DenseQubo q(p);
  const double tol = tie_tolerance(q);

  // Counting order with variable 0 as the most significant bit visits
  // bitstrings lexicographically; each increment flips the trailing ones
  // and one zero.
  Bits s(n, 0);
  std::vector<double> field = q.diag;  // Q_ii + Σ_j Q_ij s_j
  double e = q.offset;
  Bits best = s;
  double best_e = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 1; m < total; ++m) {
    const std::uint64_t changed = m ^ (m - 1);
    for (std::uint64_t c = changed; c; c &= c - 1) {
      const std::size_t bit = static_cast<std::size_t>(std::countr_zero(c));
      const std::size_t i = n - 1 - bit;
      const double sign = s[i] ? -1.0 : 1.0;
      e += sign * field[i];
      s[i] ^= 1U;
      for (const auto& t : q.adj[i]) field[t.j] += sign * t.q;
    }
    if (e < best_e - tol) {
      best_e = e;
      best = s;
    }
  }
  return {best, p.energy(best)};
}

QuboSolution solve_qubo_exact_blockwise(const QuboProblem& p, std::span<const std::size_t> core_vars) {
  const std::size_t n = p.n_vars;
  const detail::DenseQubo q(p);
  std::vector<char> is_core(n, 0);
  for (auto c : core_vars) {
    if (c >= n) throw ValidationError("core variable out of range");
    is_core[c] = 1;
  }
  std::vector<std::size_t> core;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_core[i]) core.push_back(i);
  }
  if (core.size() > kExactQuboLimit) {
    throw SizeLimitError("blockwise exact solver: " + std::to_string(core.size()) +
                         " core variables exceeds the limit of " + std::to_string(kExactQuboLimit));
  }

  // Connected components of the coupling graph restricted to non-core vars.
  constexpr std::size_t kBlockLimit = 20;
  std::vector<std::vector<std::size_t>> blocks;
  {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t s0 = 0; s0 < n; ++s0) {
      if (is_core[s0] || seen[s0]) continue;
      blocks.emplace_back();
      seen[s0] = 1;
      stack.assign(1, s0);
      while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        blocks.back().push_back(v);
        for (const auto& t : q.adj[v]) {
          if (!is_core[t.j] && !seen[t.j]) {
            seen[t.j] = 1;
            stack.push_back(t.j);
          }
        }
      }
      std::sort(blocks.back().begin(), blocks.back().end());
      if (blocks.back().size() > kBlockLimit) {
        throw SizeLimitError("blockwise exact solver: block of " + std::to_string(blocks.back().size()) +
                             " variables exceeds the limit of " + std::to_string(kBlockLimit));
      }
    }
  }
  // Intra-block couplings, indexed by block-local positions.
  struct BlockData {
    std::vector<std::size_t> vars;
    std::vector<double> pair;  // k×k upper triangle, row-major
  };
  std::vector<BlockData> bd;
  for (const auto& b : blocks) {
    BlockData d{b, std::vector<double>(b.size() * b.size(), 0.0)};
    for (std::size_t a = 0; a < b.size(); ++a) {
      for (const auto& t : q.adj[b[a]]) {
        auto it = std::lower_bound(b.begin(), b.end(), t.j);
        if (it != b.end() && *it == t.j) {
          const auto c = static_cast<std::size_t>(it - b.begin());
          if (a < c) d.pair[a * b.size() + c] += t.q;
        }
      }
    }
    bd.push_back(std::move(d));
  }

  const double tol = tie_tolerance(q);
  Bits s(n, 0);
  std::vector<double> field = q.diag;
  double core_e = q.offset;

  Bits best;
  double best_e = 0.0;
  bool have_best = false;
  std::vector<std::uint64_t> block_choice(bd.size());

  auto evaluate = [&]() {
    double e = core_e;
    for (std::size_t bi = 0; bi < bd.size(); ++bi) {
      const auto& d = bd[bi];
      const std::size_t k = d.vars.size();
      double best_delta = 0.0;
      std::uint64_t best_mask = 0;
      const std::uint64_t total = std::uint64_t{1} << k;
      // Lexicographic order within the block: position 0 most significant.
      for (std::uint64_t m = 1; m < total; ++m) {
        double delta = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
          if (!((m >> (k - 1 - a)) & 1U)) continue;
          delta += field[d.vars[a]];
          for (std::size_t c = a + 1; c < k; ++c) {
            if ((m >> (k - 1 - c)) & 1U) delta += d.pair[a * k + c];
          }
        }
        if (delta < best_delta - tol) {
          best_delta = delta;
          best_mask = m;
        }
      }
      block_choice[bi] = best_mask;
      e += best_delta;
    }
    if (!have_best || e < best_e - tol) {
      have_best = true;
      best_e = e;
      best = s;
      for (std::size_t bi = 0; bi < bd.size(); ++bi) {
        const std::size_t k = bd[bi].vars.size();
        for (std::size_t a = 0; a < k; ++a) {
          best[bd[bi].vars[a]] = static_cast<std::uint8_t>((block_choice[bi] >> (k - 1 - a)) & 1U);
        }
      }
    }
  };

  evaluate();
  const std::size_t nc = core.size();
  const std::uint64_t total = std::uint64_t{1} << nc;
  for (std::uint64_t m = 1; m < total; ++m) {
    const std::uint64_t changed = m ^ (m - 1);
    for (std::uint64_t c = changed; c; c &= c - 1) {
      const std::size_t bit = static_cast<std::size_t>(std::countr_zero(c));
      const std::size_t i = core[nc - 1 - bit];
      const double sign = s[i] ? -1.0 : 1.0;
      core_e += sign * field[i];
      s[i] ^= 1U;
      for (const auto& t : q.adj[i]) field[t.j] += sign * t.q;
    }
    evaluate();
  }
  return {best, p.energy(best)};
}

// ---------------------------------------------------------------------------
// Ising transform

double IsingModel::energy(std::span<const std::int8_t> spins) const {
  if (spins.size() != h.size()) throw ValidationError("spin vector length does not match model size");
  double e = offset;
  for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * spins[i];
  for (const auto& [key, j] : J) e += j * spins[key.first] * spins[key.second];
  return e;
}

IsingModel to_ising(const QuboProblem& p) {
  // Q_ii s_i        = Q_ii/2 · x_i + Q_ii/2
  // Q_ij s_i s_j    = Q_ij/4 · (x_i x_j + x_i + x_j + 1)
  IsingModel m;
  m.h.assign(p.n_vars, 0.0);
  m.offset = p.offset;
  for (const auto& [key, q] : p.coeffs) {
    const auto [i, j] = key;
    if (i == j) {
      m.h[i] += q / 2.0;
      m.offset += q / 2.0;
    } else {
      m.J[{i, j}] += q / 4.0;
      m.h[i] += q / 4.0;
      m.h[j] += q / 4.0;
      m.offset += q / 4.0;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Minimum-cost ε-dense subsets

std::vector<std::uint64_t> slack_coeffs(std::uint64_t n_states) {
  if (n_states == 0) throw ValidationError("slack_coeffs: n_states must be positive");
  const auto top = static_cast<std::size_t>(std::bit_width(n_states) - 1);  // ⌊log2 n_states⌋
  std::vector<std::uint64_t> gamma(top + 1);
  for (std::size_t k = 0; k < top; ++k) gamma[k] = std::uint64_t{1} << k;
  gamma[top] = (n_states - 1) - ((std::uint64_t{1} << top) - 1);
  return gamma;
}

double default_msc_lambda(std::size_t n, std::span<const double> costs) {
  double cmax = 0.0;
  for (double c : costs) cmax = std::max(cmax, std::abs(c));
  return std::floor(static_cast<double>(n) * cmax) + 1.0;
}

QuboProblem build_msc_qubo(const NeighborhoodGraph& g, std::span<const double> costs, double lambda) {
  const std::size_t n = g.size();
  if (costs.size() != n) throw ValidationError("build_msc_qubo: one cost per vertex required");
  double cmax = 0.0;
  for (double c : costs) {
    if (!(c > 0.0)) throw ValidationError("build_msc_qubo: costs must be positive");
    cmax = std::max(cmax, c);
  }
  if (!(lambda > static_cast<double>(n) * cmax)) {
    throw ValidationError("build_msc_qubo: lambda must exceed n*max(costs) = " +
                          std::to_string(static_cast<double>(n) * cmax));
  }

  std::vector<VarOrigin> origin;
  for (std::size_t i = 0; i < n; ++i) origin.push_back({VarOrigin::Kind::vertex, i, 0});
  std::vector<std::vector<std::pair<std::size_t, double>>> slack_terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto gamma = slack_coeffs(g.degree(i) + 1);
    for (std::size_t k = 0; k < gamma.size(); ++k) {
      if (gamma[k] == 0) continue;
      slack_terms[i].emplace_back(origin.size(), static_cast<double>(gamma[k]));
      origin.push_back({VarOrigin::Kind::slack, i, k});
    }
  }
  const std::size_t n_vars = origin.size();
  QuboProblem p = QuboProblem::with_vars(n_vars, std::move(origin));

  for (std::size_t i = 0; i < n; ++i) p.add_term(i, i, costs[i]);

  // Penalty λ·(Σ_a c_a v_a + c0)² with c0 = -1, expanded using v² = v.
  std::vector<std::pair<std::size_t, double>> lin;
  for (std::size_t i = 0; i < n; ++i) {
    lin.clear();
    lin.emplace_back(i, 1.0);
    for (auto u : g.neighbors(i)) lin.emplace_back(u, 1.0);
    for (const auto& [var, gk] : slack_terms[i]) lin.emplace_back(var, -gk);
    constexpr double c0 = -1.0;
    p.offset += lambda * c0 * c0;
    for (std::size_t a = 0; a < lin.size(); ++a) {
      const auto [va, ca] = lin[a];
      p.add_term(va, va, lambda * (ca * ca + 2.0 * c0 * ca));
      for (std::size_t b = a + 1; b < lin.size(); ++b) {
        const auto [vb, cb] = lin[b];
        p.add_term(va, vb, lambda * 2.0 * ca * cb);
      }
    }
  }
  return p;
}

QuboSolution solve_msc_exact(const QuboProblem& p) {
  std::vector<std::size_t> core;
  for (std::size_t i = 0; i < p.n_vars; ++i) {
    if (p.var_origin[p.source_index[i]].kind == VarOrigin::Kind::vertex) core.push_back(i);
  }
  return solve_qubo_exact_blockwise(p, core);
}

// ---------------------------------------------------------------------------
// Text export

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_qubo_text(std::ostream& out, const QuboProblem& p) {
  out << p.n_vars << ' ' << format_double(p.offset) << '\n';
  for (const auto& [key, q] : p.coeffs) {
    if (q == 0.0) continue;
    out << key.first << ' ' << key.second << ' ' << format_double(q) << '\n';
  }
}

QuboProblem read_qubo_text(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++row;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(row, "missing header line");
  std::istringstream head(line);
  std::size_t n = 0;
  double offset = 0.0;
  if (!(head >> n >> offset)) throw ParseError(row, "header must be 'n offset'");
  QuboProblem p = QuboProblem::with_vars(n);
  p.offset = offset;
  while (next_line()) {
    std::istringstream ls(line);
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) throw ParseError(row, "expected 'i j value'");
    if (i >= n || j >= n) throw ParseError(row, "term index out of range");
    p.add_term(i, j, v);
  }
  return p;
}

}  // namespace epsclust
