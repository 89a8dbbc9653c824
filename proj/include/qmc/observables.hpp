// POVMs with labeled outcomes: event effects, sequential and conditioned
// products, outcome distributions, post-processing, random measures,
// tensor composites, reductions and coarse-graining.
#ifndef QMC_OBSERVABLES_HPP
#define QMC_OBSERVABLES_HPP

#include <unordered_map>
#include <utility>
#include <vector>

#include "qmc/effects.hpp"
#include "qmc/outcomes.hpp"

namespace qmc {

class Observable {
 public:
  // Validates every effect and the sum-to-identity condition; the thrown
  // message names the larger of the two residuals.
  static Observable make(std::vector<std::pair<OutcomeLabel, Effect>> outcomes,
                         Tolerance tol = {});
  static Observable trusted(std::vector<std::pair<OutcomeLabel, Effect>> outcomes);

  // The single-outcome observable {1}.
  static Observable unit(int dim, OutcomeLabel label = "0");

  int dim() const noexcept { return dim_; }
  size_t size() const noexcept { return labels_.size(); }
  const std::vector<OutcomeLabel>& labels() const noexcept { return labels_; }
  const OutcomeLabel& label(size_t i) const { return labels_.at(i); }
  const Effect& effect(size_t i) const { return effects_.at(i); }
  const Effect& at(const OutcomeLabel& x) const;
  bool contains(const OutcomeLabel& x) const { return index_.count(x) > 0; }

 private:
  Observable() = default;
  int dim_ = 0;
  std::vector<OutcomeLabel> labels_;
  std::vector<Effect> effects_;
  std::unordered_map<OutcomeLabel, size_t> index_;
};

// Row-stochastic transition matrix between two outcome sets.
class StochasticMatrix {
 public:
  static StochasticMatrix make(std::vector<OutcomeLabel> rows, std::vector<OutcomeLabel> cols,
                               RealMatrix entries, Tolerance tol = {});

  static StochasticMatrix permutation(const std::vector<OutcomeLabel>& labels);
  // Kronecker product: ((x,r),(y,s)) entry = nu[x,y] * mu[r,s].
  static StochasticMatrix product(const StochasticMatrix& nu, const StochasticMatrix& mu);

  const std::vector<OutcomeLabel>& rows() const noexcept { return rows_; }
  const std::vector<OutcomeLabel>& cols() const noexcept { return cols_; }
  double entry(size_t r, size_t c) const { return p_(r, c); }

 private:
  StochasticMatrix() = default;
  std::vector<OutcomeLabel> rows_, cols_;
  RealMatrix p_;
};

// Sum of the effects over a set of outcome labels; the full set gives 1.
Effect event_effect(const Observable& A, const std::vector<OutcomeLabel>& X);

// (A o B)_{(x,y)} = A_x o B_y on the product outcome space.
Observable seq_prod_obs(const Observable& A, const Observable& B, Tolerance tol = {});

// (B|A)_y = sum_x A_x o B_y: B conditioned by a prior A measurement.
Observable condition_obs(const Observable& B, const Observable& A, Tolerance tol = {});

// Outcome distribution tr(rho A_x), aligned with A.labels().
std::vector<double> distribution(const DensityState& rho, const Observable& A,
                                 Tolerance tol = {});

// tr[rho (A o B)_{X x Y}]: probability of A in X, then B in Y.
double then_probability(const DensityState& rho, const Observable& A,
                        const std::vector<OutcomeLabel>& X, const Observable& B,
                        const std::vector<OutcomeLabel>& Y, Tolerance tol = {});

// (nu . A)_y = sum_x nu_{xy} A_x on the column labels.
Observable post_process(const StochasticMatrix& nu, const Observable& A, Tolerance tol = {});

// Distribution of A in the maximally mixed state: tr(A_x)/n.
std::vector<double> random_measure(const Observable& A);

// Composite observable (A1 (x) A2)_{(x,y)} = A1_x (x) A2_y.
Observable tensor_obs(const Observable& A1, const Observable& A2);

// Outcome-wise reduced effects; still an observable on the factor.
Observable reduced_obs(const Observable& A, DimPair dims, Factor side);

// A = f(B): A_x sums the effects in the fiber of x.
Observable coarse_grain(const Observable& B, const Surjection& f);

}  // namespace qmc

#endif  // QMC_OBSERVABLES_HPP
