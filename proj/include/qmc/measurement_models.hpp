// Measurement models: base system, probe, initial probe state, interaction
// channel and probe observable. Provides the model instrument/observable,
// reduced models on a factor of the base, and composites of two models
// glued through the unitary swap operator.
#ifndef QMC_MEASUREMENT_MODELS_HPP
#define QMC_MEASUREMENT_MODELS_HPP

#include "qmc/instruments.hpp"

namespace qmc {

class MeasurementModel {
 public:
  static MeasurementModel make(int base_dim, int probe_dim, DensityState eta, Channel nu,
                               Observable probe_obs, Tolerance tol = {});

  int base_dim() const noexcept { return base_dim_; }
  int probe_dim() const noexcept { return probe_dim_; }
  const DensityState& eta() const noexcept { return eta_; }
  const Channel& nu() const noexcept { return nu_; }
  const Observable& probe_observable() const noexcept { return probe_obs_; }

  // Same model with the probe observable replaced (outcome relabelings and
  // coarse-grainings of a model leave the rest of the 5-tuple untouched).
  MeasurementModel with_probe_observable(Observable F, Tolerance tol = {}) const;

 private:
  MeasurementModel(int base_dim, int probe_dim, DensityState eta, Channel nu, Observable F)
      : base_dim_(base_dim),
        probe_dim_(probe_dim),
        eta_(std::move(eta)),
        nu_(std::move(nu)),
        probe_obs_(std::move(F)) {}
  int base_dim_;
  int probe_dim_;
  DensityState eta_;
  Channel nu_;
  Observable probe_obs_;
};

// The instrument the model measures: M_x(rho) = tr_K[nu(rho (x) eta)(1 (x) F_x)],
// assembled per outcome through its Choi matrix.
Instrument model_instrument(const MeasurementModel& M, Tolerance tol = {});

// The observable the model measures; the hat of the model instrument.
Observable model_observable(const MeasurementModel& M, Tolerance tol = {});

// Model instrument of the reduced model on one factor of the base,
// computed directly from the interchanged-partial-trace formula without
// materializing the reduced interaction as a standalone channel.
Instrument reduced_model_instrument(const MeasurementModel& M, DimPair dims, Factor side,
                                    Tolerance tol = {});

struct SwapOperator {
  int n1, n2, k1, k2;
  Matrix U;  // H1 (x) H2 (x) K1 (x) K2 -> H1 (x) K1 (x) H2 (x) K2
};

// Permutation unitary with U(phi1 (x) phi2 (x) psi1 (x) psi2)
//                          = phi1 (x) psi1 (x) phi2 (x) psi2.
SwapOperator swap_operator(int n1, int n2, int k1, int k2);

// Composite of two models: base H1 (x) H2, probe K1 (x) K2, probe state
// eta1 (x) eta2, probe observable F1 (x) F2, and interaction with Kraus
// operators U^t (S_i (x) T_j) U in lexicographic (i,j) order.
MeasurementModel composite_mm(const MeasurementModel& M1, const MeasurementModel& M2,
                              Tolerance tol = {});

}  // namespace qmc

#endif  // QMC_MEASUREMENT_MODELS_HPP
