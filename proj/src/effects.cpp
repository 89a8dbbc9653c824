#include "qmc/effects.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qmc {

Effect Effect::make(const Matrix& M, Tolerance tol) {
  const Matrix H = ensure_hermitian(M, tol);
  const RealVector eigs = hermitian_eigenvalues(H, tol);
  if (eigs.minCoeff() < -tol.eps()) {
    std::ostringstream os;
    os << "effect violates lower bound 0: eigenvalue " << eigs.minCoeff();
    throw ValidationError(os.str());
  }
  if (eigs.maxCoeff() > 1.0 + tol.eps()) {
    std::ostringstream os;
    os << "effect violates upper bound 1: eigenvalue " << eigs.maxCoeff();
    throw ValidationError(os.str());
  }
  return Effect(H);
}

Effect Effect::trusted(Matrix M) { return Effect(std::move(M)); }

Effect Effect::zero(int dim) { return Effect(Matrix::Zero(dim, dim)); }

Effect Effect::unit(int dim) { return Effect(Matrix::Identity(dim, dim)); }

Effect Effect::atom(const Vector& phi, Tolerance tol) {
  if (std::abs(phi.norm() - 1.0) > tol.eps() * 10.0) {
    throw ValidationError("atom: vector is not normalized");
  }
  return Effect(phi * phi.adjoint());
}

DensityState DensityState::full(const Matrix& M, Tolerance tol) {
  const Matrix H = ensure_hermitian(M, tol);
  if (!is_psd(H, tol)) throw ValidationError("state is not positive semidefinite");
  const double tr = H.trace().real();
  if (std::abs(tr - 1.0) > tol.eps()) {
    std::ostringstream os;
    os << "full state must have unit trace, got " << tr;
    throw ValidationError(os.str());
  }
  return DensityState(H, Kind::full);
}

DensityState DensityState::partial(const Matrix& M, Tolerance tol) {
  const Matrix H = ensure_hermitian(M, tol);
  if (!is_psd(H, tol)) throw ValidationError("partial state is not positive semidefinite");
  const double tr = H.trace().real();
  if (tr > 1.0 + tol.eps()) {
    std::ostringstream os;
    os << "partial state trace exceeds 1: " << tr;
    throw ValidationError(os.str());
  }
  return DensityState(H, Kind::partial);
}

DensityState DensityState::trusted(Matrix M, Kind kind) {
  return DensityState(std::move(M), kind);
}

DensityState DensityState::mixed(int dim) {
  return DensityState(Matrix::Identity(dim, dim) / static_cast<double>(dim), Kind::full);
}

DensityState DensityState::pure(const Vector& psi, Tolerance tol) {
  if (std::abs(psi.norm() - 1.0) > tol.eps() * 10.0) {
    throw ValidationError("pure state vector is not normalized");
  }
  return DensityState(psi * psi.adjoint(), Kind::full);
}

Effect complement(const Effect& a) {
  return Effect::trusted(Matrix::Identity(a.dim(), a.dim()) - a.matrix());
}

Effect seq_prod(const Effect& a, const Effect& b, Tolerance tol) {
  if (a.dim() != b.dim()) {
    throw DimensionError("seq_prod: effects act on different spaces");
  }
  const Matrix root = principal_sqrt(a.matrix(), tol);
  return Effect::trusted(root * b.matrix() * root);
}

double occurrence_prob(const DensityState& rho, const Effect& a, Tolerance tol) {
  if (!rho.is_full()) {
    throw ArgumentError("occurrence_prob requires a full (unit-trace) state");
  }
  if (rho.dim() != a.dim()) {
    throw DimensionError("occurrence_prob: state and effect dimensions differ");
  }
  double p = (rho.matrix() * a.matrix()).trace().real();
  if (p < 0.0) {
    if (p < -tol.eps()) {
      std::ostringstream os;
      os << "probability " << p << " below 0 beyond tolerance";
      throw NumericError(os.str());
    }
    p = 0.0;
  }
  if (p > 1.0) {
    if (p > 1.0 + tol.eps()) {
      std::ostringstream os;
      os << "probability " << p << " above 1 beyond tolerance";
      throw NumericError(os.str());
    }
    p = 1.0;
  }
  return p;
}

Effect reduced_effect(const Effect& a, DimPair dims, Factor side) {
  if (a.dim() != dims.total()) {
    throw DimensionError("reduced_effect: effect dimension does not factor as n1*n2");
  }
  if (side == Factor::first) {
    return Effect::trusted(partial_trace(a.matrix(), dims, Factor::second) /
                           static_cast<double>(dims.n2));
  }
  return Effect::trusted(partial_trace(a.matrix(), dims, Factor::first) /
                         static_cast<double>(dims.n1));
}

AtomCheck atom_check(const Effect& a, Tolerance tol) {
  AtomCheck out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  const RealVector eigs = solver.eigenvalues();
  const int n = a.dim();
  // Largest eigenvalue must be 1, all others 0.
  if (std::abs(eigs[n - 1] - 1.0) > tol.eps() * 10.0) return out;
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(eigs[i]) > tol.eps() * 10.0) return out;
  }
  out.is_atom = true;
  out.unit_vector = solver.eigenvectors().col(n - 1);
  return out;
}

bool is_indecomposable(const Effect& a, Tolerance tol) {
  const RealVector eigs = hermitian_eigenvalues(a.matrix(), tol);
  int above = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs[i] > tol.eps() * 10.0) ++above;
  }
  return above <= 1;
}

std::optional<std::pair<Effect, Effect>> factorization_test(const Effect& a, DimPair dims,
                                                            Tolerance tol) {
  if (a.dim() != dims.total()) {
    throw DimensionError("factorization_test: effect dimension does not factor as n1*n2");
  }
  const double tr = a.matrix().trace().real();
  if (tr <= tol.eps()) {
    // Zero effect: trivially factorized.
    return std::make_pair(Effect::zero(dims.n1), Effect::zero(dims.n2));
  }
  const Effect a1 = reduced_effect(a, dims, Factor::first);
  const Effect a2 = reduced_effect(a, dims, Factor::second);
  const double scale = static_cast<double>(dims.n1) * static_cast<double>(dims.n2) / tr;
  const Matrix candidate = scale * tensor(a1.matrix(), a2.matrix());
  if (!approx_eq(candidate, a.matrix(), tol)) return std::nullopt;

  // Gauge: b = a^1 / lambda_max(a^1) has largest eigenvalue 1; c absorbs the
  // remaining scale. Both stay valid effects when a is factorized.
  const RealVector eigs1 = hermitian_eigenvalues(a1.matrix(), tol);
  const double lmax = eigs1.maxCoeff();
  if (lmax <= tol.eps()) return std::nullopt;
  Matrix b = a1.matrix() / lmax;
  Matrix c = (scale * lmax) * a2.matrix();
  return std::make_pair(Effect::trusted(std::move(b)), Effect::trusted(std::move(c)));
}

std::pair<RealVector, RealVector> atom_reduction_spectrum(const Effect& a, DimPair dims,
                                                          Tolerance tol) {
  const AtomCheck check = atom_check(a, tol);
  if (!check.is_atom) {
    throw ArgumentError("atom_reduction_spectrum: effect is not an atom");
  }
  const Effect a1 = reduced_effect(a, dims, Factor::first);
  const Effect a2 = reduced_effect(a, dims, Factor::second);
  const RealVector e1 = hermitian_eigenvalues(a1.matrix(), tol);
  const RealVector e2 = hermitian_eigenvalues(a2.matrix(), tol);
  const double cutoff = tol.eps() * 10.0;
  std::vector<double> nz1, nz2;
  for (Eigen::Index i = e1.size(); i-- > 0;) {
    if (e1[i] > cutoff) nz1.push_back(e1[i]);
  }
  for (Eigen::Index i = e2.size(); i-- > 0;) {
    if (e2[i] > cutoff) nz2.push_back(e2[i]);
  }
  RealVector v1(nz1.size()), v2(nz2.size());
  for (size_t i = 0; i < nz1.size(); ++i) v1[static_cast<Eigen::Index>(i)] = nz1[i];
  for (size_t i = 0; i < nz2.size(); ++i) v2[static_cast<Eigen::Index>(i)] = nz2[i];
  return {v1, v2};
}

}  // namespace qmc
