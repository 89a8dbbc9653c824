#include "qmc/measurement_models.hpp"

#include <sstream>

namespace qmc {

MeasurementModel MeasurementModel::make(int base_dim, int probe_dim, DensityState eta,
                                        Channel nu, Observable probe_obs, Tolerance tol) {
  if (base_dim < 1 || probe_dim < 1) {
    throw ArgumentError("measurement model: dimensions must be >= 1");
  }
  if (!eta.is_full()) {
    throw ValidationError("measurement model: probe state must have unit trace");
  }
  if (eta.dim() != probe_dim) {
    throw DimensionError("measurement model: probe state dimension differs from probe_dim");
  }
  if (nu.dim() != base_dim * probe_dim) {
    std::ostringstream os;
    os << "measurement model: interaction acts on " << nu.dim() << ", expected "
       << base_dim * probe_dim;
    throw DimensionError(os.str());
  }
  if (probe_obs.dim() != probe_dim) {
    throw DimensionError("measurement model: probe observable dimension differs from probe_dim");
  }
  (void)tol;
  return MeasurementModel(base_dim, probe_dim, std::move(eta), std::move(nu),
                          std::move(probe_obs));
}

MeasurementModel MeasurementModel::with_probe_observable(Observable F, Tolerance tol) const {
  return make(base_dim_, probe_dim_, eta_, nu_, std::move(F), tol);
}

Instrument model_instrument(const MeasurementModel& M, Tolerance tol) {
  const int n = M.base_dim();
  const int k = M.probe_dim();
  const Observable& F = M.probe_observable();
  const Matrix one_base = Matrix::Identity(n, n);

  // Image of every base matrix unit under the interaction, reused per outcome.
  std::vector<Matrix> propagated(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = Complex(1.0, 0.0);
      propagated[static_cast<size_t>(i) * n + j] = M.nu().apply(tensor(unit, M.eta().matrix()));
    }
  }

  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(F.size());
  for (size_t x = 0; x < F.size(); ++x) {
    const Matrix window = tensor(one_base, F.effect(x).matrix());
    Matrix choi = Matrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Matrix mapped = partial_trace(
            propagated[static_cast<size_t>(i) * n + j] * window, DimPair(n, k), Factor::second);
        choi.block(i * n, j * n, n, n) = mapped;
      }
    }
    ops.emplace_back(F.label(x), QuantumOperation::from_choi(choi, n, n, tol));
  }
  return Instrument::trusted(std::move(ops));
}

Observable model_observable(const MeasurementModel& M, Tolerance tol) {
  return measured_observable(model_instrument(M, tol));
}

Instrument reduced_model_instrument(const MeasurementModel& M, DimPair dims, Factor side,
                                    Tolerance tol) {
  if (M.base_dim() != dims.total()) {
    throw DimensionError("reduced_model_instrument: base does not factor as n1*n2");
  }
  const int k = M.probe_dim();
  const int nf = side == Factor::first ? dims.n1 : dims.n2;
  const int other = side == Factor::first ? dims.n2 : dims.n1;
  const Observable& F = M.probe_observable();
  const Matrix one_other = Matrix::Identity(other, other);

  // nu(E_ij (x) 1_other (x) eta) with the other base factor already traced
  // out, leaving operators on H_f (x) K.
  std::vector<Matrix> propagated(static_cast<size_t>(nf) * nf);
  const std::vector<int> dims3{dims.n1, dims.n2, k};
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      Matrix unit = Matrix::Zero(nf, nf);
      unit(i, j) = Complex(1.0, 0.0);
      const Matrix arg = side == Factor::first
                             ? tensor(unit, one_other, M.eta().matrix())
                             : tensor(one_other, unit, M.eta().matrix());
      const Matrix full = M.nu().apply(arg);
      propagated[static_cast<size_t>(i) * nf + j] =
          partial_trace_factor(full, dims3, side == Factor::first ? 1 : 0) /
          static_cast<double>(other);
    }
  }

  const Matrix one_f = Matrix::Identity(nf, nf);
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(F.size());
  for (size_t x = 0; x < F.size(); ++x) {
    const Matrix window = tensor(one_f, F.effect(x).matrix());
    Matrix choi = Matrix::Zero(nf * nf, nf * nf);
    for (int i = 0; i < nf; ++i) {
      for (int j = 0; j < nf; ++j) {
        const Matrix mapped =
            partial_trace(propagated[static_cast<size_t>(i) * nf + j] * window, DimPair(nf, k),
                          Factor::second);
        choi.block(i * nf, j * nf, nf, nf) = mapped;
      }
    }
    ops.emplace_back(F.label(x), QuantumOperation::from_choi(choi, nf, nf, tol));
  }
  return Instrument::trusted(std::move(ops));
}

SwapOperator swap_operator(int n1, int n2, int k1, int k2) {
  if (n1 < 1 || n2 < 1 || k1 < 1 || k2 < 1) {
    throw ArgumentError("swap_operator: dimensions must be >= 1");
  }
  const long total = static_cast<long>(n1) * n2 * k1 * k2;
  Matrix U = Matrix::Zero(total, total);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < k1; ++k)
        for (int l = 0; l < k2; ++l) {
          const long in = ((static_cast<long>(i) * n2 + j) * k1 + k) * k2 + l;
          const long out = ((static_cast<long>(i) * k1 + k) * n2 + j) * k2 + l;
          U(out, in) = Complex(1.0, 0.0);
        }
  return SwapOperator{n1, n2, k1, k2, std::move(U)};
}

MeasurementModel composite_mm(const MeasurementModel& M1, const MeasurementModel& M2,
                              Tolerance tol) {
  const SwapOperator swap =
      swap_operator(M1.base_dim(), M2.base_dim(), M1.probe_dim(), M2.probe_dim());
  std::vector<Matrix> kraus;
  kraus.reserve(M1.nu().op().kraus().size() * M2.nu().op().kraus().size());
  for (const auto& S : M1.nu().op().kraus())
    for (const auto& T : M2.nu().op().kraus())
      kraus.push_back(swap.U.adjoint() * tensor(S, T) * swap.U);
  Channel nu = Channel::from_kraus(std::move(kraus), Tolerance(tol.eps() * 100));
  DensityState eta = DensityState::trusted(tensor(M1.eta().matrix(), M2.eta().matrix()),
                                           DensityState::Kind::full);
  Observable F = tensor_obs(M1.probe_observable(), M2.probe_observable());
  return MeasurementModel::make(M1.base_dim() * M2.base_dim(),
                                M1.probe_dim() * M2.probe_dim(), std::move(eta), std::move(nu),
                                std::move(F), tol);
}

}  // namespace qmc
