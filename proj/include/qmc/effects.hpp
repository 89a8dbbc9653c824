// Effects (operators with spectrum in [0,1]) and density states, plus the
// operations on them: complement, sequential product, occurrence
// probabilities, subsystem reductions, factorization and atom tests.
#ifndef QMC_EFFECTS_HPP
#define QMC_EFFECTS_HPP

#include <optional>
#include <utility>

#include "qmc/linalg.hpp"
#include "qmc/types.hpp"

namespace qmc {

class Effect {
 public:
  // Validated constructor: Hermitian within tol, spectrum in [-eps, 1+eps].
  static Effect make(const Matrix& M, Tolerance tol = {});

  // Skips spectrum validation; for results that are effects by construction.
  static Effect trusted(Matrix M);

  static Effect zero(int dim);
  static Effect unit(int dim);
  // Rank-1 projection onto a unit vector.
  static Effect atom(const Vector& phi, Tolerance tol = {});

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

 private:
  explicit Effect(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

class DensityState {
 public:
  enum class Kind { full, partial };

  static DensityState full(const Matrix& M, Tolerance tol = {});
  static DensityState partial(const Matrix& M, Tolerance tol = {});
  static DensityState trusted(Matrix M, Kind kind);
  // Maximally mixed state 1/n.
  static DensityState mixed(int dim);
  static DensityState pure(const Vector& psi, Tolerance tol = {});

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  Kind kind() const noexcept { return kind_; }
  bool is_full() const noexcept { return kind_ == Kind::full; }
  double trace() const { return m_.trace().real(); }

 private:
  DensityState(Matrix m, Kind kind) : m_(std::move(m)), kind_(kind) {}
  Matrix m_;
  Kind kind_;
};

struct AtomCheck {
  bool is_atom = false;
  std::optional<Vector> unit_vector;
};

// 1 - a.
Effect complement(const Effect& a);

// a o b = a^{1/2} b a^{1/2}: measure a, then b.
Effect seq_prod(const Effect& a, const Effect& b, Tolerance tol = {});

// tr(rho a), clipped to [0,1] when within tol of the boundary.
double occurrence_prob(const DensityState& rho, const Effect& a, Tolerance tol = {});

// Reduced effect on the chosen factor: a^1 = tr_2(a)/n2, a^2 = tr_1(a)/n1.
Effect reduced_effect(const Effect& a, DimPair dims, Factor side);

// Detects rank-1 projections.
AtomCheck atom_check(const Effect& a, Tolerance tol = {});

// True iff a = lambda * atom for some lambda in [0,1] (numerical rank <= 1).
bool is_indecomposable(const Effect& a, Tolerance tol = {});

// Tests whether a = b (x) c for effects b, c on the factors. Returns the
// factors when the identity a = (n1 n2 / tr a) a^1 (x) a^2 holds within tol.
// The gauge fixes b = a^1 / lambda_max(a^1) so that b has unit norm.
std::optional<std::pair<Effect, Effect>> factorization_test(const Effect& a, DimPair dims,
                                                            Tolerance tol = {});

// Nonzero eigenvalues of the two reductions of an atom, paired descending;
// they satisfy alpha_i = (n1/n2) beta_i.
std::pair<RealVector, RealVector> atom_reduction_spectrum(const Effect& a, DimPair dims,
                                                          Tolerance tol = {});

}  // namespace qmc

#endif  // QMC_EFFECTS_HPP
