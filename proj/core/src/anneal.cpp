#include <cmath>
#include <random>

#include "epsclust/error.hpp"
#include "epsclust/qubo.hpp"
#include "epsclust/rng.hpp"
#include "qubo_internal.hpp"

namespace epsclust {

namespace {

class Annealer {
public:
  explicit Annealer(const detail::DenseQubo& q) : q_(q), s_(q.diag.size(), 0), field_(q.diag.size()) {}

  void randomize(Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    for (auto& b : s_) b = coin(rng) ? 1 : 0;
    recompute();
  }

  void recompute() {
    energy_ = q_.offset;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      field_[i] = q_.diag[i];
      for (const auto& t : q_.adj[i]) field_[i] += t.q * s_[t.j];
      if (s_[i]) energy_ += q_.diag[i];
    }
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (!s_[i]) continue;
      for (const auto& t : q_.adj[i]) {
        if (t.j > i && s_[t.j]) energy_ += t.q;
      }
    }
  }

  double delta(std::size_t i) const { return s_[i] ? -field_[i] : field_[i]; }

  void flip(std::size_t i) {
    const double sign = s_[i] ? -1.0 : 1.0;
    energy_ += sign * field_[i];
    s_[i] ^= 1U;
    for (const auto& t : q_.adj[i]) field_[t.j] += sign * t.q;
  }

  void sweep(double temperature, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const double d = delta(i);
      if (d <= 0.0 || unit(rng) < std::exp(-d / temperature)) flip(i);
    }
  }

  // Greedy descent until no single flip lowers the energy.
  void quench(double tol) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < s_.size(); ++i) {
        if (delta(i) < -tol) {
          flip(i);
          improved = true;
        }
      }
    }
  }

  const Bits& state() const { return s_; }
  void set_state(const Bits& s) {
    s_ = s;
    recompute();
  }
  double energy() const { return energy_; }

private:
  const detail::DenseQubo& q_;
  Bits s_;
  std::vector<double> field_;
  double energy_ = 0.0;
};

}  // namespace

QuboSolution solve_qubo_anneal(const QuboProblem& p, const AnnealSchedule& schedule) {
  if (schedule.sweeps == 0 || schedule.restarts == 0) {
    throw ValidationError("anneal schedule needs at least one sweep and one restart");
  }
  const std::size_t n = p.n_vars;
  if (n == 0) return {Bits{}, p.offset};

  const detail::DenseQubo q(p);
  const double scale = p.max_abs_coeff();
  if (scale == 0.0) {
    Bits zeros(n, 0);
    return {zeros, p.energy(zeros)};
  }
  const double t0 = schedule.t_initial > 0.0 ? schedule.t_initial : 10.0 * scale;
  const double t1 = schedule.t_final;
  if (!(t1 > 0.0) || !(t1 < t0)) {
    throw ValidationError("anneal schedule requires 0 < t_final < t_initial");
  }
  const double ratio = schedule.sweeps > 1
                           ? std::pow(t1 / t0, 1.0 / static_cast<double>(schedule.sweeps - 1))
                           : 1.0;

  const double quench_tol = 1e-12 * scale;

  QuboSolution best;
  bool have_best = false;
  Annealer a(q);
  for (std::size_t r = 0; r < schedule.restarts; ++r) {
    Rng rng(derive_seed(schedule.seed, {r}));
    a.randomize(rng);
    Bits best_seen = a.state();
    double best_seen_e = a.energy();
    double t = schedule.sweeps > 1 ? t0 : t1;
    for (std::size_t sw = 0; sw < schedule.sweeps; ++sw, t *= ratio) {
      a.sweep(t, rng);
      if (a.energy() < best_seen_e) {
        best_seen_e = a.energy();
        best_seen = a.state();
      }
    }
    a.quench(quench_tol);
    Bits candidate = a.state();
    a.set_state(best_seen);
    a.quench(quench_tol);
    if (a.energy() < p.energy(candidate)) candidate = a.state();

    const double e = p.energy(candidate);
    if (!have_best || e < best.energy) {
      best = {std::move(candidate), e};
      have_best = true;
    }
  }
  return best;
}

}  // namespace epsclust
