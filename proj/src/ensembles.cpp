#include "qmc/ensembles.hpp"

#include <Eigen/QR>

#include <cmath>

namespace qmc {

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw ArgumentError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t value = engine_();
  while (value >= limit) value = engine_();
  return lo + static_cast<int>(value % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

Matrix ginibre(Rng& rng, int rows, int cols) {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = rng.cnormal();
  return out;
}

Matrix random_hermitian(Rng& rng, int n) {
  const Matrix g = ginibre(rng, n, n);
  return 0.5 * (g + g.adjoint().eval());
}

Matrix random_psd(Rng& rng, int n) {
  const Matrix g = ginibre(rng, n, n);
  return g * g.adjoint();
}

Matrix random_unitary(Rng& rng, int n) {
  const Matrix g = ginibre(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase gauge so the distribution is Haar.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

Vector random_unit_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.cnormal();
  return v / v.norm();
}

DensityState random_state(Rng& rng, int n) {
  Matrix p = random_psd(rng, n);
  p /= p.trace().real();
  return DensityState::trusted(std::move(p), DensityState::Kind::full);
}

Effect random_effect(Rng& rng, int n) {
  Matrix p = random_psd(rng, n);
  const RealVector eigs = hermitian_eigenvalues(p);
  const double top = rng.uniform(0.2, 1.0);
  p *= top / eigs.maxCoeff();
  return Effect::trusted(std::move(p));
}

Observable random_observable(Rng& rng, int n, int outcomes) {
  std::vector<Matrix> parts;
  parts.reserve(outcomes);
  Matrix sum = Matrix::Zero(n, n);
  for (int i = 0; i < outcomes; ++i) {
    parts.push_back(random_psd(rng, n));
    sum += parts.back();
  }
  // S^{-1/2} P_i S^{-1/2} sums to the identity exactly.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sum);
  const Matrix inv_root = solver.eigenvectors() *
                          solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          solver.eigenvectors().adjoint();
  std::vector<std::pair<OutcomeLabel, Effect>> result;
  result.reserve(outcomes);
  const auto labels = index_labels(outcomes);
  for (int i = 0; i < outcomes; ++i) {
    result.emplace_back(labels[i], Effect::trusted(inv_root * parts[i] * inv_root));
  }
  return Observable::trusted(std::move(result));
}

Observable random_atomic_observable(Rng& rng, int n) {
  const Matrix u = random_unitary(rng, n);
  std::vector<std::pair<OutcomeLabel, Effect>> result;
  result.reserve(n);
  const auto labels = index_labels(n);
  for (int i = 0; i < n; ++i) {
    const Vector col = u.col(i);
    result.emplace_back(labels[i], Effect::trusted(col * col.adjoint()));
  }
  return Observable::trusted(std::move(result));
}

std::pair<Observable, Observable> random_commuting_pair(Rng& rng, int n, int outcomes_a,
                                                        int outcomes_b) {
  const Matrix u = random_unitary(rng, n);
  auto diagonal_obs = [&](int outcomes) {
    // One probability vector over outcomes per basis index.
    RealMatrix weights(n, outcomes);
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int x = 0; x < outcomes; ++x) {
        weights(i, x) = rng.uniform(0.05, 1.0);
        sum += weights(i, x);
      }
      weights.row(i) /= sum;
    }
    std::vector<std::pair<OutcomeLabel, Effect>> result;
    const auto labels = index_labels(outcomes);
    for (int x = 0; x < outcomes; ++x) {
      Matrix diag = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) diag(i, i) = weights(i, x);
      result.emplace_back(labels[x], Effect::trusted(u * diag * u.adjoint()));
    }
    return Observable::trusted(std::move(result));
  };
  return {diagonal_obs(outcomes_a), diagonal_obs(outcomes_b)};
}

Instrument random_kraus_instrument(Rng& rng, int n, int outcomes) {
  std::vector<Matrix> raw;
  raw.reserve(outcomes);
  Matrix sum = Matrix::Zero(n, n);
  for (int i = 0; i < outcomes; ++i) {
    raw.push_back(ginibre(rng, n, n));
    sum += raw.back().adjoint() * raw.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sum);
  const Matrix inv_root = solver.eigenvectors() *
                          solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          solver.eigenvectors().adjoint();
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  const auto labels = index_labels(outcomes);
  for (int i = 0; i < outcomes; ++i) {
    ops.emplace_back(labels[i],
                     QuantumOperation::from_kraus({raw[i] * inv_root}, Tolerance(1e-6)));
  }
  return Instrument::trusted(std::move(ops));
}

Instrument random_instrument(Rng& rng, int n, int outcomes, int ops_per_outcome) {
  std::vector<std::vector<Matrix>> raw(outcomes);
  Matrix sum = Matrix::Zero(n, n);
  for (int i = 0; i < outcomes; ++i) {
    for (int j = 0; j < ops_per_outcome; ++j) {
      raw[i].push_back(ginibre(rng, n, n));
      sum += raw[i].back().adjoint() * raw[i].back();
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sum);
  const Matrix inv_root = solver.eigenvectors() *
                          solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          solver.eigenvectors().adjoint();
  std::vector<std::pair<OutcomeLabel, QuantumOperation>> ops;
  const auto labels = index_labels(outcomes);
  for (int i = 0; i < outcomes; ++i) {
    std::vector<Matrix> kraus;
    kraus.reserve(ops_per_outcome);
    for (auto& k : raw[i]) kraus.push_back(k * inv_root);
    ops.emplace_back(labels[i], QuantumOperation::from_kraus(std::move(kraus), Tolerance(1e-6)));
  }
  return Instrument::trusted(std::move(ops));
}

Channel random_channel(Rng& rng, int n, int kraus_count) {
  std::vector<Matrix> raw;
  raw.reserve(kraus_count);
  Matrix sum = Matrix::Zero(n, n);
  for (int i = 0; i < kraus_count; ++i) {
    raw.push_back(ginibre(rng, n, n));
    sum += raw.back().adjoint() * raw.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sum);
  const Matrix inv_root = solver.eigenvectors() *
                          solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          solver.eigenvectors().adjoint();
  std::vector<Matrix> kraus;
  kraus.reserve(kraus_count);
  for (auto& k : raw) kraus.push_back(k * inv_root);
  return Channel::from_kraus(std::move(kraus), Tolerance(1e-6));
}

Instrument random_trivial_instrument(Rng& rng, int n, int outcomes) {
  const Observable a = random_observable(rng, n, outcomes);
  const DensityState delta = random_state(rng, n);
  return trivial(a, delta);
}

StochasticMatrix random_stochastic(Rng& rng, std::vector<OutcomeLabel> rows,
                                   std::vector<OutcomeLabel> cols) {
  RealMatrix p(rows.size(), cols.size());
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      p(r, c) = rng.uniform(0.05, 1.0);
      sum += p(r, c);
    }
    p.row(r) /= sum;
  }
  return StochasticMatrix::make(std::move(rows), std::move(cols), std::move(p));
}

Surjection random_surjection(Rng& rng, const std::vector<OutcomeLabel>& domain,
                             int codomain_size) {
  if (codomain_size < 1 || codomain_size > static_cast<int>(domain.size())) {
    throw ArgumentError("random_surjection: codomain size out of range");
  }
  const auto codomain = index_labels(codomain_size, "c");
  // Guarantee surjectivity: the first |codomain| slots of a shuffled domain
  // hit each codomain label once, the rest land anywhere.
  std::vector<size_t> order(domain.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::unordered_map<OutcomeLabel, OutcomeLabel> assignment;
  for (size_t i = 0; i < order.size(); ++i) {
    const int target = i < static_cast<size_t>(codomain_size)
                           ? static_cast<int>(i)
                           : rng.uniform_int(0, codomain_size - 1);
    assignment[domain[order[i]]] = codomain[target];
  }
  return Surjection::make(domain, codomain, std::move(assignment));
}

std::vector<OutcomeLabel> random_event(Rng& rng, const std::vector<OutcomeLabel>& labels) {
  std::vector<OutcomeLabel> out;
  for (const auto& l : labels) {
    if (rng.uniform() < 0.5) out.push_back(l);
  }
  return out;
}

MeasurementModel random_mm(Rng& rng, int base_dim, int probe_dim, int outcomes,
                           int interaction_kraus) {
  DensityState eta = random_state(rng, probe_dim);
  Channel nu = random_channel(rng, base_dim * probe_dim, interaction_kraus);
  Observable f = random_observable(rng, probe_dim, outcomes);
  return MeasurementModel::make(base_dim, probe_dim, std::move(eta), std::move(nu),
                                std::move(f));
}

}  // namespace qmc
