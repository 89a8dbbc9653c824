// Seeded random ensembles of states, effects, observables, instruments and
// measurement models. The generator avoids library distribution objects so
// a seed pins the exact same instances on every platform; the theorem-suite
// reports depend on that.
#ifndef QMC_ENSEMBLES_HPP
#define QMC_ENSEMBLES_HPP

#include <cstdint>
#include <random>

#include "qmc/measurement_models.hpp"

namespace qmc {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], bias-free via rejection.
  int uniform_int(int lo, int hi);

  // Standard normal via Box-Muller.
  double normal();

  Complex cnormal() { return Complex(normal(), normal()) / std::sqrt(2.0); }

  // Deterministic Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(uniform_int(0, i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// 64-bit FNV-1a; stable per-check sub-seeds derived from string ids.
std::uint64_t fnv1a64(const std::string& text);

Matrix ginibre(Rng& rng, int rows, int cols);
Matrix random_hermitian(Rng& rng, int n);
Matrix random_psd(Rng& rng, int n);
Matrix random_unitary(Rng& rng, int n);
Vector random_unit_vector(Rng& rng, int n);
DensityState random_state(Rng& rng, int n);
Effect random_effect(Rng& rng, int n);

// POVM via P_i -> S^{-1/2} P_i S^{-1/2} with S the sum of random PSD parts.
Observable random_observable(Rng& rng, int n, int outcomes);

// n rank-1 projectors onto the columns of a random unitary.
Observable random_atomic_observable(Rng& rng, int n);

// Two observables diagonal in one random basis; every pair of effects
// commutes.
std::pair<Observable, Observable> random_commuting_pair(Rng& rng, int n, int outcomes_a,
                                                        int outcomes_b);

// Instrument with a single Kraus operator per outcome.
Instrument random_kraus_instrument(Rng& rng, int n, int outcomes);

// General instrument with several Kraus operators per outcome.
Instrument random_instrument(Rng& rng, int n, int outcomes, int ops_per_outcome = 2);

Channel random_channel(Rng& rng, int n, int kraus_count = 2);

Instrument random_trivial_instrument(Rng& rng, int n, int outcomes);

StochasticMatrix random_stochastic(Rng& rng, std::vector<OutcomeLabel> rows,
                                   std::vector<OutcomeLabel> cols);

// Random surjection from the given domain onto `codomain_size` fresh labels.
Surjection random_surjection(Rng& rng, const std::vector<OutcomeLabel>& domain,
                             int codomain_size);

// Subset of the labels, each kept with probability 1/2.
std::vector<OutcomeLabel> random_event(Rng& rng, const std::vector<OutcomeLabel>& labels);

MeasurementModel random_mm(Rng& rng, int base_dim, int probe_dim, int outcomes,
                           int interaction_kraus = 2);

}  // namespace qmc

#endif  // QMC_ENSEMBLES_HPP
