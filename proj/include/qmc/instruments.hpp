// Completely positive maps held in dual Kraus/Choi form, channels, and
// outcome-indexed instruments with their measured observables. Includes
// the Lueders, Kraus and trivial constructors plus product, conditioned,
// tensor, reduced and coarse-grained instruments.
#ifndef QMC_INSTRUMENTS_HPP
#define QMC_INSTRUMENTS_HPP

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmc/observables.hpp"

namespace qmc {

class QuantumOperation {
 public:
  // Builds the Choi matrix from the Kraus list and checks sum S^t S <= 1.
  static QuantumOperation from_kraus(std::vector<Matrix> kraus, Tolerance tol = {});

  // Extracts Kraus operators from a PSD Choi matrix, keeping eigenvalues
  // above eps. A Choi matrix that is not PSD beyond eps signals a non-CP
  // map and is rejected.
  static QuantumOperation from_choi(const Matrix& choi, int dim_in, int dim_out,
                                    Tolerance tol = {});

  static QuantumOperation identity(int dim);

  // rho -> tr(rho a) delta, realized through its Choi block a^T (x) delta.
  static QuantumOperation trivial_op(const Effect& a, const Matrix& delta, Tolerance tol = {});

  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const Matrix& choi() const noexcept { return choi_; }
  int dim_in() const noexcept { return dim_in_; }
  int dim_out() const noexcept { return dim_out_; }

  Matrix apply(const Matrix& rho) const;
  DensityState apply(const DensityState& rho) const;

  // sum_i S_i^t S_i; equals 1 exactly for channels.
  Matrix kraus_sum() const;
  // The effect tr(rho a) = tr[op(rho)] dual to this operation.
  Effect dual_effect() const;

  QuantumOperation scaled(double factor) const;

 private:
  QuantumOperation() = default;
  int dim_in_ = 0, dim_out_ = 0;
  std::vector<Matrix> kraus_;
  Matrix choi_;
};

// Operation equality in the only representation-free sense: Choi matrices
// within eps * dim_in^2 in Frobenius norm.
bool operations_equal(const QuantumOperation& a, const QuantumOperation& b, Tolerance tol = {});
double choi_distance(const QuantumOperation& a, const QuantumOperation& b);

Matrix choi_from_kraus(const std::vector<Matrix>& kraus);

class Channel {
 public:
  static Channel make(QuantumOperation op, Tolerance tol = {});
  static Channel identity(int dim);
  static Channel from_kraus(std::vector<Matrix> kraus, Tolerance tol = {});
  // Unitary conjugation rho -> U rho U^t.
  static Channel unitary(const Matrix& U, Tolerance tol = {});

  const QuantumOperation& op() const noexcept { return op_; }
  int dim() const noexcept { return op_.dim_in(); }
  Matrix apply(const Matrix& rho) const { return op_.apply(rho); }

 private:
  explicit Channel(QuantumOperation op) : op_(std::move(op)) {}
  QuantumOperation op_;
};

class Instrument {
 public:
  static Instrument make(std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops,
                         Tolerance tol = {});
  static Instrument trusted(std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops);

  // Single-outcome instrument wrapping a channel.
  static Instrument from_channel(const Channel& c, OutcomeLabel label = "0");

  int dim() const noexcept { return dim_; }
  size_t size() const noexcept { return labels_.size(); }
  const std::vector<OutcomeLabel>& labels() const noexcept { return labels_; }
  const OutcomeLabel& label(size_t i) const { return labels_.at(i); }
  const QuantumOperation& op(size_t i) const { return ops_.at(i); }
  const QuantumOperation& at(const OutcomeLabel& x) const;
  bool contains(const OutcomeLabel& x) const { return index_.count(x) > 0; }

  // sum over an event; total() is the instrument's channel.
  QuantumOperation event_op(const std::vector<OutcomeLabel>& X) const;
  QuantumOperation total() const;

 private:
  Instrument() = default;
  int dim_ = 0;
  std::vector<OutcomeLabel> labels_;
  std::vector<QuantumOperation> ops_;
  std::unordered_map<OutcomeLabel, size_t> index_;
};

// The unique observable measured by I: effects sum_i S_{x,i}^t S_{x,i}.
Observable measured_observable(const Instrument& I);

// Lueders instrument of A: one Kraus operator A_x^{1/2} per outcome.
Instrument luders(const Observable& A, Tolerance tol = {});

// Trivial instrument: I_x(rho) = tr(rho A_x) delta.
Instrument trivial(const Observable& A, const DensityState& delta, Tolerance tol = {});

// (I o J)_{(x,y)} = J_y after I_x; Kraus lists composed pairwise.
Instrument product_instr(const Instrument& I, const Instrument& J);

// (J | I)_y = J_y after the total channel of I.
Instrument condition_instr(const Instrument& J, const Instrument& I);

// (I1 (x) I2)_{(x,y)} = I1_x (x) I2_y.
Instrument tensor_instr(const Instrument& I1, const Instrument& I2);

// Reduced instrument I^1_x(rho1) = tr_2[I_x(rho1 (x) 1_2)]/n2, materialized
// through its Choi matrix; similarly for side 2.
Instrument reduced_instr(const Instrument& I, DimPair dims, Factor side, Tolerance tol = {});

// mu^I(x) = tr[I_x(1)]/n, the outcome distribution on the mixed state.
std::vector<double> instr_random_measure(const Instrument& I);

// f(I): operations summed over fibers by concatenating Kraus lists.
Instrument coarse_grain_instr(const Instrument& I, const Surjection& f);

// Recognizes instruments of the trivial form and extracts (A, delta).
std::optional<std::pair<Observable, DensityState>> as_trivial(const Instrument& I,
                                                              Tolerance tol = {});

// Structure report for composites of two trivial instruments: the tensor
// is trivial with observable A (x) B and state alpha (x) beta, and its
// reductions are trivial with the weighted observables and local states.
struct TrivialCompositeReport {
  double tensor_residual = 0.0;        // tensor vs trivial(A (x) B, alpha (x) beta)
  double reduction1_residual = 0.0;    // (I1 (x) I2)^1 vs weighted trivial form
  double reduction2_residual = 0.0;
  double reduced_of_composite1 = 0.0;  // reduced-of-trivial: observable/state split, side 1
  double reduced_of_composite2 = 0.0;
};

TrivialCompositeReport trivial_composites(const Instrument& I1, const Instrument& I2,
                                          Tolerance tol = {});

}  // namespace qmc

#endif  // QMC_INSTRUMENTS_HPP
