#pragma once

#include <cstddef>
#include <vector>

#include "epsclust/qubo.hpp"

namespace epsclust::detail {

/// Adjacency-list view of a QUBO for solvers that flip single bits.
struct DenseQubo {
  struct Term {
    std::size_t j;
    double q;
  };

  explicit DenseQubo(const QuboProblem& p);

  std::vector<double> diag;
  std::vector<std::vector<Term>> adj;
  double offset = 0.0;
};

}  // namespace epsclust::detail
