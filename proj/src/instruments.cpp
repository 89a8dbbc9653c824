#include "qmc/instruments.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qmc {

namespace {

Matrix maximally_entangled_vec(int n) {
  // sum_i e_i (x) e_i as a column vector of length n*n.
  Matrix v = Matrix::Zero(n * n, 1);
  for (int i = 0; i < n; ++i) v(i * n + i, 0) = Complex(1.0, 0.0);
  return v;
}

void check_kraus_shapes(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw ArgumentError("operation needs at least one Kraus operator");
  const Eigen::Index rows = kraus.front().rows();
  const Eigen::Index cols = kraus.front().cols();
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols) {
      throw DimensionError("Kraus operators have inconsistent shapes");
    }
  }
}

}  // namespace

Matrix choi_from_kraus(const std::vector<Matrix>& kraus) {
  check_kraus_shapes(kraus);
  const int dim_in = static_cast<int>(kraus.front().cols());
  const int dim_out = static_cast<int>(kraus.front().rows());
  Matrix choi = Matrix::Zero(dim_in * dim_out, dim_in * dim_out);
  for (const auto& S : kraus) {
    Vector v(dim_in * dim_out);
    for (int i = 0; i < dim_in; ++i)
      for (int r = 0; r < dim_out; ++r) v[i * dim_out + r] = S(r, i);
    choi += v * v.adjoint();
  }
  return choi;
}

QuantumOperation QuantumOperation::from_kraus(std::vector<Matrix> kraus, Tolerance tol) {
  check_kraus_shapes(kraus);
  QuantumOperation op;
  op.dim_in_ = static_cast<int>(kraus.front().cols());
  op.dim_out_ = static_cast<int>(kraus.front().rows());
  op.kraus_ = std::move(kraus);
  op.choi_ = choi_from_kraus(op.kraus_);
  const Matrix gap = Matrix::Identity(op.dim_in_, op.dim_in_) - op.kraus_sum();
  if (!is_psd(gap, tol)) {
    throw ValidationError("operation is not trace-non-increasing: sum S^t S exceeds 1");
  }
  return op;
}

QuantumOperation QuantumOperation::from_choi(const Matrix& choi, int dim_in, int dim_out,
                                             Tolerance tol) {
  if (choi.rows() != static_cast<Eigen::Index>(dim_in) * dim_out || choi.rows() != choi.cols()) {
    throw DimensionError("from_choi: Choi matrix shape does not match dim_in*dim_out");
  }
  const Matrix H = ensure_hermitian(choi, Tolerance(tol.eps() * choi.rows()));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) {
    throw NumericError("from_choi: eigendecomposition failed");
  }
  const RealVector eigs = solver.eigenvalues();
  if (eigs.minCoeff() < -tol.eps() * choi.rows()) {
    std::ostringstream os;
    os << "Choi matrix is not PSD (eigenvalue " << eigs.minCoeff()
       << "): the map is not completely positive";
    throw ValidationError(os.str());
  }
  std::vector<Matrix> kraus;
  for (Eigen::Index k = eigs.size(); k-- > 0;) {
    if (eigs[k] <= tol.eps()) continue;
    const double w = std::sqrt(eigs[k]);
    Matrix S(dim_out, dim_in);
    for (int i = 0; i < dim_in; ++i)
      for (int r = 0; r < dim_out; ++r) S(r, i) = w * solver.eigenvectors()(i * dim_out + r, k);
    kraus.push_back(std::move(S));
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(dim_out, dim_in));
  QuantumOperation op;
  op.dim_in_ = dim_in;
  op.dim_out_ = dim_out;
  op.kraus_ = std::move(kraus);
  op.choi_ = choi_from_kraus(op.kraus_);
  return op;
}

QuantumOperation QuantumOperation::identity(int dim) {
  QuantumOperation op;
  op.dim_in_ = op.dim_out_ = dim;
  op.kraus_ = {Matrix::Identity(dim, dim)};
  op.choi_ = choi_from_kraus(op.kraus_);
  return op;
}

QuantumOperation QuantumOperation::trivial_op(const Effect& a, const Matrix& delta,
                                              Tolerance tol) {
  const Matrix choi = tensor(a.matrix().transpose().eval(), delta);
  return from_choi(choi, a.dim(), static_cast<int>(delta.rows()), tol);
}

Matrix QuantumOperation::apply(const Matrix& rho) const {
  if (rho.rows() != dim_in_ || rho.cols() != dim_in_) {
    throw DimensionError("operation applied to a matrix of the wrong dimension");
  }
  Matrix out = Matrix::Zero(dim_out_, dim_out_);
  for (const auto& S : kraus_) out += S * rho * S.adjoint();
  return out;
}

DensityState QuantumOperation::apply(const DensityState& rho) const {
  return DensityState::trusted(apply(rho.matrix()), DensityState::Kind::partial);
}

Matrix QuantumOperation::kraus_sum() const {
  Matrix sum = Matrix::Zero(dim_in_, dim_in_);
  for (const auto& S : kraus_) sum += S.adjoint() * S;
  return sum;
}

Effect QuantumOperation::dual_effect() const { return Effect::trusted(kraus_sum()); }

QuantumOperation QuantumOperation::scaled(double factor) const {
  if (factor < 0.0) throw ArgumentError("operation scale factor must be non-negative");
  QuantumOperation op;
  op.dim_in_ = dim_in_;
  op.dim_out_ = dim_out_;
  const double root = std::sqrt(factor);
  op.kraus_.reserve(kraus_.size());
  for (const auto& S : kraus_) op.kraus_.push_back(root * S);
  op.choi_ = factor * choi_;
  return op;
}

double choi_distance(const QuantumOperation& a, const QuantumOperation& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("choi_distance: operations act between different spaces");
  }
  return (a.choi() - b.choi()).norm();
}

bool operations_equal(const QuantumOperation& a, const QuantumOperation& b, Tolerance tol) {
  const double dim = static_cast<double>(a.dim_in());
  return choi_distance(a, b) <= tol.eps() * dim * dim;
}

Channel Channel::make(QuantumOperation op, Tolerance tol) {
  const Matrix sum = op.kraus_sum();
  const double residual = (sum - Matrix::Identity(op.dim_in(), op.dim_in())).norm();
  if (residual > tol.eps() * std::sqrt(static_cast<double>(op.dim_in()))) {
    std::ostringstream os;
    os << "not a channel: sum S^t S deviates from identity by " << residual;
    throw ValidationError(os.str());
  }
  return Channel(std::move(op));
}

Channel Channel::identity(int dim) { return Channel(QuantumOperation::identity(dim)); }

Channel Channel::from_kraus(std::vector<Matrix> kraus, Tolerance tol) {
  return make(QuantumOperation::from_kraus(std::move(kraus), tol), tol);
}

Channel Channel::unitary(const Matrix& U, Tolerance tol) {
  if (U.rows() != U.cols()) throw DimensionError("unitary channel: matrix must be square");
  const Matrix gram = U.adjoint() * U;
  if (!approx_eq(gram, Matrix::Identity(U.rows(), U.cols()), tol)) {
    throw ValidationError("unitary channel: matrix is not unitary");
  }
  return from_kraus({U}, tol);
}

Instrument Instrument::make(std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops,
                            Tolerance tol) {
  if (ops.empty()) throw ValidationError("instrument needs at least one outcome");
  Instrument ins;
  ins.dim_ = ops.front().second.dim_in();
  Matrix sum = Matrix::Zero(ins.dim_, ins.dim_);
  for (auto& [label, op] : ops) {
    if (op.dim_in() != ins.dim_ || op.dim_out() != ins.dim_) {
      throw DimensionError("instrument: operation for '" + label +
                           "' does not act on the common space");
    }
    if (ins.index_.count(label)) {
      throw ValidationError("instrument: duplicate outcome label '" + label + "'");
    }
    sum += op.kraus_sum();
    ins.index_[label] = ins.labels_.size();
    ins.labels_.push_back(label);
    ins.ops_.push_back(std::move(op));
  }
  const double residual = (sum - Matrix::Identity(ins.dim_, ins.dim_)).norm();
  if (residual > tol.eps() * std::sqrt(static_cast<double>(ins.dim_))) {
    std::ostringstream os;
    os << "instrument total is not trace-preserving: residual " << residual;
    throw ValidationError(os.str());
  }
  return ins;
}

Instrument Instrument::trusted(std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops) {
  Instrument ins;
  ins.dim_ = ops.front().second.dim_in();
  for (auto& [label, op] : ops) {
    ins.index_[label] = ins.labels_.size();
    ins.labels_.push_back(label);
    ins.ops_.push_back(std::move(op));
  }
  return ins;
}

Instrument Instrument::from_channel(const Channel& c, OutcomeLabel label) {
  return trusted({{std::move(label), c.op()}});
}

const QuantumOperation& Instrument::at(const OutcomeLabel& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw ArgumentError("instrument has no outcome '" + x + "'");
  }
  return ops_[it->second];
}

QuantumOperation Instrument::event_op(const std::vector<OutcomeLabel>& X) const {
  std::set<OutcomeLabel> seen;
  std::vector<Matrix> kraus;
  for (const auto& x : X) {
    if (!seen.insert(x).second) continue;
    const auto& op = at(x);
    kraus.insert(kraus.end(), op.kraus().begin(), op.kraus().end());
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(dim_, dim_));
  return QuantumOperation::from_kraus(std::move(kraus), Tolerance(kDefaultTol * 100));
}

QuantumOperation Instrument::total() const { return event_op(labels_); }

Observable measured_observable(const Instrument& I) {
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(I.size());
  for (size_t i = 0; i < I.size(); ++i) {
    outcomes.emplace_back(I.label(i), I.op(i).dual_effect());
  }
  return Observable::trusted(std::move(outcomes));
}

Instrument luders(const Observable& A, Tolerance tol) {
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    ops.emplace_back(A.label(i), QuantumOperation::from_kraus(
                                     {principal_sqrt(A.effect(i).matrix(), tol)},
                                     Tolerance(tol.eps() * 100)));
  }
  return Instrument::trusted(std::move(ops));
}

Instrument trivial(const Observable& A, const DensityState& delta, Tolerance tol) {
  if (!delta.is_full()) throw ArgumentError("trivial instrument needs a full output state");
  if (delta.dim() != A.dim()) {
    throw DimensionError("trivial instrument: state and observable dimensions differ");
  }
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    ops.emplace_back(A.label(i), QuantumOperation::trivial_op(A.effect(i), delta.matrix(), tol));
  }
  return Instrument::trusted(std::move(ops));
}

Instrument product_instr(const Instrument& I, const Instrument& J) {
  if (I.dim() != J.dim()) {
    throw DimensionError("product_instr: instruments act on different spaces");
  }
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(I.size() * J.size());
  for (size_t x = 0; x < I.size(); ++x) {
    for (size_t y = 0; y < J.size(); ++y) {
      std::vector<Matrix> kraus;
      kraus.reserve(I.op(x).kraus().size() * J.op(y).kraus().size());
      for (const auto& S : I.op(x).kraus())
        for (const auto& T : J.op(y).kraus()) kraus.push_back(T * S);
      ops.emplace_back(pair_label(I.label(x), J.label(y)),
                       QuantumOperation::from_kraus(std::move(kraus), Tolerance(kDefaultTol * 100)));
    }
  }
  return Instrument::trusted(std::move(ops));
}

Instrument condition_instr(const Instrument& J, const Instrument& I) {
  if (I.dim() != J.dim()) {
    throw DimensionError("condition_instr: instruments act on different spaces");
  }
  const QuantumOperation total = I.total();
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(J.size());
  for (size_t y = 0; y < J.size(); ++y) {
    std::vector<Matrix> kraus;
    kraus.reserve(total.kraus().size() * J.op(y).kraus().size());
    for (const auto& S : total.kraus())
      for (const auto& T : J.op(y).kraus()) kraus.push_back(T * S);
    ops.emplace_back(J.label(y),
                     QuantumOperation::from_kraus(std::move(kraus), Tolerance(kDefaultTol * 100)));
  }
  return Instrument::trusted(std::move(ops));
}

Instrument tensor_instr(const Instrument& I1, const Instrument& I2) {
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(I1.size() * I2.size());
  for (size_t x = 0; x < I1.size(); ++x) {
    for (size_t y = 0; y < I2.size(); ++y) {
      std::vector<Matrix> kraus;
      kraus.reserve(I1.op(x).kraus().size() * I2.op(y).kraus().size());
      for (const auto& S : I1.op(x).kraus())
        for (const auto& T : I2.op(y).kraus()) kraus.push_back(tensor(S, T));
      ops.emplace_back(pair_label(I1.label(x), I2.label(y)),
                       QuantumOperation::from_kraus(std::move(kraus), Tolerance(kDefaultTol * 100)));
    }
  }
  return Instrument::trusted(std::move(ops));
}

Instrument reduced_instr(const Instrument& I, DimPair dims, Factor side, Tolerance tol) {
  if (I.dim() != dims.total()) {
    throw DimensionError("reduced_instr: instrument dimension does not factor as n1*n2");
  }
  const int nf = side == Factor::first ? dims.n1 : dims.n2;
  const int other = side == Factor::first ? dims.n2 : dims.n1;
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(I.size());
  for (size_t x = 0; x < I.size(); ++x) {
    Matrix choi = Matrix::Zero(nf * nf, nf * nf);
    for (int i = 0; i < nf; ++i) {
      for (int j = 0; j < nf; ++j) {
        Matrix unit = Matrix::Zero(nf, nf);
        unit(i, j) = Complex(1.0, 0.0);
        const Matrix arg = side == Factor::first ? tensor(unit, Matrix::Identity(other, other))
                                                 : tensor(Matrix::Identity(other, other), unit);
        const Matrix mapped =
            partial_trace(I.op(x).apply(arg), dims,
                          side == Factor::first ? Factor::second : Factor::first) /
            static_cast<double>(other);
        choi.block(i * nf, j * nf, nf, nf) = mapped;
      }
    }
    ops.emplace_back(I.label(x), QuantumOperation::from_choi(choi, nf, nf, tol));
  }
  return Instrument::trusted(std::move(ops));
}

std::vector<double> instr_random_measure(const Instrument& I) {
  std::vector<double> out;
  out.reserve(I.size());
  const Matrix one = Matrix::Identity(I.dim(), I.dim());
  for (size_t x = 0; x < I.size(); ++x) {
    out.push_back(I.op(x).apply(one).trace().real() / static_cast<double>(I.dim()));
  }
  return out;
}

Instrument coarse_grain_instr(const Instrument& I, const Surjection& f) {
  const std::set<OutcomeLabel> dom(f.domain().begin(), f.domain().end());
  const std::set<OutcomeLabel> labels(I.labels().begin(), I.labels().end());
  if (dom != labels) {
    throw ArgumentError("coarse_grain_instr: surjection domain does not match the outcome set");
  }
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  ops.reserve(f.codomain().size());
  for (const auto& y : f.codomain()) {
    ops.emplace_back(y, I.event_op(f.fiber(y)));
  }
  return Instrument::trusted(std::move(ops));
}

std::optional<std::pair<Observable, DensityState>> as_trivial(const Instrument& I,
                                                              Tolerance tol) {
  const int n = I.dim();
  const Matrix total_on_one = I.total().apply(Matrix::Identity(n, n));
  const Matrix delta = total_on_one / static_cast<double>(n);
  const Observable hat = measured_observable(I);
  const double bound = tol.eps() * static_cast<double>(n) * static_cast<double>(n) * 10.0;
  for (size_t x = 0; x < I.size(); ++x) {
    const Matrix expected = tensor(hat.effect(x).matrix().transpose().eval(), delta);
    if ((I.op(x).choi() - expected).norm() > bound) return std::nullopt;
  }
  DensityState state = DensityState::full(delta, Tolerance(tol.eps() * 100));
  return std::make_pair(hat, std::move(state));
}

TrivialCompositeReport trivial_composites(const Instrument& I1, const Instrument& I2,
                                          Tolerance tol) {
  const auto t1 = as_trivial(I1, tol);
  const auto t2 = as_trivial(I2, tol);
  if (!t1 || !t2) throw ArgumentError("trivial_composites: inputs are not trivial instruments");
  const auto& [A, alpha] = *t1;
  const auto& [B, beta] = *t2;
  const DimPair dims(I1.dim(), I2.dim());

  TrivialCompositeReport report;

  const Instrument J = tensor_instr(I1, I2);
  const Instrument expected_tensor =
      trivial(tensor_obs(A, B),
              DensityState::trusted(tensor(alpha.matrix(), beta.matrix()),
                                    DensityState::Kind::full),
              tol);
  for (size_t i = 0; i < J.size(); ++i) {
    report.tensor_residual =
        std::max(report.tensor_residual, choi_distance(J.op(i), expected_tensor.op(i)));
  }

  const std::vector<double> muB = random_measure(B);
  const std::vector<double> muA = random_measure(A);
  const Instrument J1 = reduced_instr(J, dims, Factor::first, tol);
  const Instrument J2 = reduced_instr(J, dims, Factor::second, tol);
  for (size_t x = 0; x < I1.size(); ++x) {
    for (size_t y = 0; y < I2.size(); ++y) {
      const auto& op1 = J1.at(pair_label(I1.label(x), I2.label(y)));
      const QuantumOperation expected1 = QuantumOperation::trivial_op(
          Effect::trusted(muB[y] * A.effect(x).matrix()), alpha.matrix(), tol);
      report.reduction1_residual =
          std::max(report.reduction1_residual, choi_distance(op1, expected1));

      const auto& op2 = J2.at(pair_label(I1.label(x), I2.label(y)));
      const QuantumOperation expected2 = QuantumOperation::trivial_op(
          Effect::trusted(muA[x] * B.effect(y).matrix()), beta.matrix(), tol);
      report.reduction2_residual =
          std::max(report.reduction2_residual, choi_distance(op2, expected2));
    }
  }

  // Reduced-of-trivial: the composite J is itself trivial with observable
  // A (x) B and state alpha (x) beta, so its reductions must be trivial with
  // the reduced effects and the local states.
  const Observable AB = tensor_obs(A, B);
  const Matrix alpha_beta = tensor(alpha.matrix(), beta.matrix());
  for (size_t i = 0; i < AB.size(); ++i) {
    const QuantumOperation expected1 = QuantumOperation::trivial_op(
        reduced_effect(AB.effect(i), dims, Factor::first),
        partial_trace(alpha_beta, dims, Factor::second), tol);
    report.reduced_of_composite1 =
        std::max(report.reduced_of_composite1, choi_distance(J1.op(i), expected1));
    const QuantumOperation expected2 = QuantumOperation::trivial_op(
        reduced_effect(AB.effect(i), dims, Factor::second),
        partial_trace(alpha_beta, dims, Factor::first), tol);
    report.reduced_of_composite2 =
        std::max(report.reduced_of_composite2, choi_distance(J2.op(i), expected2));
  }
  return report;
}

}  // namespace qmc
