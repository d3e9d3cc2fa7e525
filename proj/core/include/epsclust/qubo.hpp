#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "epsclust/graph.hpp"

namespace epsclust {

using Bits = std::vector<std::uint8_t>;

/// Where a QUBO variable comes from: a graph vertex or bit `bit` of the
/// slack encoding attached to vertex `index`.
struct VarOrigin {
  enum class Kind : std::uint8_t { vertex, slack };
  Kind kind = Kind::vertex;
  std::size_t index = 0;
  std::size_t bit = 0;

  friend bool operator==(const VarOrigin&, const VarOrigin&) = default;
};

/// Minimise offset + Σ_{i<=j} Q_ij s_i s_j over s ∈ {0,1}^n_vars.
///
/// A problem may be the residual of preprocessing: `source_index` maps each
/// residual variable to a variable of the original ("source") problem,
/// `fixed` holds the source variables that were eliminated, and `offset`
/// absorbs their contribution.
struct QuboProblem {
  std::size_t n_vars = 0;
  std::map<std::pair<std::size_t, std::size_t>, double> coeffs;  ///< keys satisfy i <= j
  double offset = 0.0;
  std::map<std::size_t, std::uint8_t> fixed;  ///< source var -> value
  std::vector<std::size_t> source_index;      ///< residual var -> source var
  std::vector<VarOrigin> var_origin;          ///< indexed by source var

  /// Fresh problem with identity source mapping.
  static QuboProblem with_vars(std::size_t n, std::vector<VarOrigin> origin = {});

  std::size_t source_vars() const noexcept { return var_origin.size(); }

  /// Accumulates `value` into Q_{min(i,j), max(i,j)}.
  void add_term(std::size_t i, std::size_t j, double value);
  double coeff(std::size_t i, std::size_t j) const;

  /// offset + sᵀQs for a residual assignment.
  double energy(std::span<const std::uint8_t> bits) const;

  /// Largest absolute coefficient (0 for an empty problem).
  double max_abs_coeff() const noexcept;
};

struct QuboSolution {
  Bits bits;  ///< residual assignment
  double energy = 0.0;
};

/// Default penalty multiplier margin: λ_ij = (1 + gamma)·max{w_i, w_j}.
inline constexpr double kDefaultPenaltyMargin = 0.1;

/// MWIS QUBO: Q_ii = -w_i, Q_ij = λ_ij for every edge i < j.
QuboProblem build_mwis_qubo(const NeighborhoodGraph& g, double gamma = kDefaultPenaltyMargin);

/// As above with an arbitrary penalty rule λ_ij = penalty(w_i, w_j).
QuboProblem build_mwis_qubo_with_penalty(const NeighborhoodGraph& g,
                                         const std::function<double(double, double)>& penalty);

/// Fixes every variable without couplings and with negative diagonal to 1
/// (isolated vertices of an MWIS QUBO). The residual problem is re-indexed.
QuboProblem reduce_qubo(const QuboProblem& p);

/// Expands a residual assignment to an assignment of all source variables.
Bits restore_assignment(const QuboProblem& p, std::span<const std::uint8_t> residual_bits);

/// Source vertices set to 1 in a source assignment.
std::vector<std::size_t> selected_vertices(const QuboProblem& p, std::span<const std::uint8_t> source_bits);

inline constexpr std::size_t kExactQuboLimit = 25;

/// Exhaustive minimisation. Ties go to the lexicographically smallest
/// bitstring (variable 0 most significant). Throws SizeLimitError above
/// kExactQuboLimit variables.
QuboSolution solve_qubo_exact(const QuboProblem& p);

/// Exact minimisation for problems whose non-core variables split into
/// small mutually uncoupled blocks (slack encodings). Enumerates the core
/// variables and, for each core assignment, minimises every block on its
/// own. Guard: at most kExactQuboLimit core variables and 20 per block.
QuboSolution solve_qubo_exact_blockwise(const QuboProblem& p, std::span<const std::size_t> core_vars);

struct AnnealSchedule {
  std::size_t sweeps = 2000;
  std::size_t restarts = 10;
  double t_initial = 0.0;  ///< <= 0 selects 10·max|Q|
  double t_final = 0.01;
  std::uint64_t seed = 0;
};

/// Single-bit-flip Metropolis annealing with a geometric temperature ladder.
/// Each restart ends with a zero-temperature descent, so the returned state
/// is a single-flip local minimum. Deterministic for a given seed.
QuboSolution solve_qubo_anneal(const QuboProblem& p, const AnnealSchedule& schedule);

/// Spin model with energy offset + Σ h_i x_i + Σ_{i<j} J_ij x_i x_j.
struct IsingModel {
  std::vector<double> h;
  std::map<std::pair<std::size_t, std::size_t>, double> J;
  double offset = 0.0;

  double energy(std::span<const std::int8_t> spins) const;
};

/// Substitutes s = (x + 1) / 2.
IsingModel to_ising(const QuboProblem& p);

/// Coefficients γ_0..γ_⌊m⌋ with m = log2(n_states): powers of two followed
/// by a final coefficient making the maximum representable value
/// n_states - 1. The final coefficient is 0 when n_states is a power of two.
std::vector<std::uint64_t> slack_coeffs(std::uint64_t n_states);

/// Minimum-cost ε-dense subset QUBO:
///   Σ c_i s_i + λ Σ_i [ Σ_{j ∈ N[i]} s_j - 1 - Σ_k γ_k b_k^(i) ]²
/// where N[i] is the closed neighbourhood of i. Selection variables come
/// first, then the nonzero slack bits of vertex 0, vertex 1, ...
/// Throws ValidationError unless lambda > n·max(costs).
QuboProblem build_msc_qubo(const NeighborhoodGraph& g, std::span<const double> costs, double lambda);

/// Smallest integer-safe penalty above the correctness bound: n·max(c) + 1.
double default_msc_lambda(std::size_t n, std::span<const double> costs);

/// Exact MSC minimiser using the block structure of the slack bits.
QuboSolution solve_msc_exact(const QuboProblem& p);

/// Plain-text export: header "n offset", then "i j value" per nonzero term.
void write_qubo_text(std::ostream& out, const QuboProblem& p);
QuboProblem read_qubo_text(std::istream& in);

}  // namespace epsclust
