#include "qmc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qmc {

namespace {

void check_common_dim(const Observable& A, const Observable& B, const char* what) {
  if (A.dim() != B.dim()) {
    std::ostringstream os;
    os << what << ": observables act on different spaces (" << A.dim() << " vs " << B.dim()
       << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

Observable Observable::make(std::vector<std::pair<OutcomeLabel, Effect>> outcomes,
                            Tolerance tol) {
  if (outcomes.empty()) {
    throw ValidationError("observable needs at least one outcome");
  }
  Observable obs;
  obs.dim_ = outcomes.front().second.dim();
  Matrix sum = Matrix::Zero(obs.dim_, obs.dim_);
  double member_residual = 0.0;
  for (auto& [label, effect] : outcomes) {
    if (effect.dim() != obs.dim_) {
      throw DimensionError("observable: effect for '" + label + "' has a different dimension");
    }
    if (obs.index_.count(label)) {
      throw ValidationError("observable: duplicate outcome label '" + label + "'");
    }
    // Re-validate each member so a bad effect is named, not just the sum.
    const RealVector eigs = hermitian_eigenvalues(effect.matrix(), tol);
    member_residual = std::max(member_residual, std::max(-eigs.minCoeff(), eigs.maxCoeff() - 1.0));
    if (eigs.minCoeff() < -tol.eps() || eigs.maxCoeff() > 1.0 + tol.eps()) {
      std::ostringstream os;
      os << "observable: effect for '" << label << "' has spectrum outside [0,1] by "
         << member_residual;
      throw ValidationError(os.str());
    }
    sum += effect.matrix();
    obs.index_[label] = obs.labels_.size();
    obs.labels_.push_back(label);
    obs.effects_.push_back(std::move(effect));
  }
  const double sum_residual = (sum - Matrix::Identity(obs.dim_, obs.dim_)).norm();
  if (sum_residual > tol.eps() * std::sqrt(static_cast<double>(obs.dim_))) {
    std::ostringstream os;
    os << "observable: effects sum to identity with residual " << sum_residual
       << " (max member violation " << member_residual << ")";
    throw ValidationError(os.str());
  }
  return obs;
}

Observable Observable::trusted(std::vector<std::pair<OutcomeLabel, Effect>> outcomes) {
  Observable obs;
  obs.dim_ = outcomes.front().second.dim();
  for (auto& [label, effect] : outcomes) {
    obs.index_[label] = obs.labels_.size();
    obs.labels_.push_back(label);
    obs.effects_.push_back(std::move(effect));
  }
  return obs;
}

Observable Observable::unit(int dim, OutcomeLabel label) {
  return trusted({{std::move(label), Effect::unit(dim)}});
}

const Effect& Observable::at(const OutcomeLabel& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw ArgumentError("observable has no outcome '" + x + "'");
  }
  return effects_[it->second];
}

StochasticMatrix StochasticMatrix::make(std::vector<OutcomeLabel> rows,
                                        std::vector<OutcomeLabel> cols, RealMatrix entries,
                                        Tolerance tol) {
  if (entries.rows() != static_cast<Eigen::Index>(rows.size()) ||
      entries.cols() != static_cast<Eigen::Index>(cols.size())) {
    throw DimensionError("stochastic matrix: entry block does not match label counts");
  }
  for (Eigen::Index r = 0; r < entries.rows(); ++r) {
    double row_sum = 0.0;
    for (Eigen::Index c = 0; c < entries.cols(); ++c) {
      if (entries(r, c) < -tol.eps()) {
        throw ValidationError("stochastic matrix: negative entry in row '" + rows[r] + "'");
      }
      entries(r, c) = std::max(entries(r, c), 0.0);
      row_sum += entries(r, c);
    }
    if (std::abs(row_sum - 1.0) > tol.eps() * 10.0) {
      std::ostringstream os;
      os << "stochastic matrix: row '" << rows[r] << "' sums to " << row_sum;
      throw ValidationError(os.str());
    }
  }
  StochasticMatrix out;
  out.rows_ = std::move(rows);
  out.cols_ = std::move(cols);
  out.p_ = std::move(entries);
  return out;
}

StochasticMatrix StochasticMatrix::permutation(const std::vector<OutcomeLabel>& labels) {
  RealMatrix p = RealMatrix::Identity(static_cast<Eigen::Index>(labels.size()),
                                      static_cast<Eigen::Index>(labels.size()));
  return make(labels, labels, std::move(p));
}

StochasticMatrix StochasticMatrix::product(const StochasticMatrix& nu,
                                           const StochasticMatrix& mu) {
  std::vector<OutcomeLabel> rows = product_labels({nu.rows(), mu.rows()});
  std::vector<OutcomeLabel> cols = product_labels({nu.cols(), mu.cols()});
  RealMatrix p(rows.size(), cols.size());
  for (size_t x = 0; x < nu.rows().size(); ++x)
    for (size_t r = 0; r < mu.rows().size(); ++r)
      for (size_t y = 0; y < nu.cols().size(); ++y)
        for (size_t s = 0; s < mu.cols().size(); ++s)
          p(x * mu.rows().size() + r, y * mu.cols().size() + s) =
              nu.entry(x, y) * mu.entry(r, s);
  return make(std::move(rows), std::move(cols), std::move(p));
}

Effect event_effect(const Observable& A, const std::vector<OutcomeLabel>& X) {
  std::set<OutcomeLabel> seen;
  Matrix sum = Matrix::Zero(A.dim(), A.dim());
  for (const auto& x : X) {
    if (!seen.insert(x).second) continue;
    sum += A.at(x).matrix();
  }
  return Effect::trusted(std::move(sum));
}

Observable seq_prod_obs(const Observable& A, const Observable& B, Tolerance tol) {
  check_common_dim(A, B, "seq_prod_obs");
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(A.size() * B.size());
  for (size_t i = 0; i < A.size(); ++i) {
    const Matrix root = principal_sqrt(A.effect(i).matrix(), tol);
    for (size_t j = 0; j < B.size(); ++j) {
      outcomes.emplace_back(pair_label(A.label(i), B.label(j)),
                            Effect::trusted(root * B.effect(j).matrix() * root));
    }
  }
  return Observable::trusted(std::move(outcomes));
}

Observable condition_obs(const Observable& B, const Observable& A, Tolerance tol) {
  check_common_dim(A, B, "condition_obs");
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(B.size());
  std::vector<Matrix> roots;
  roots.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) roots.push_back(principal_sqrt(A.effect(i).matrix(), tol));
  for (size_t j = 0; j < B.size(); ++j) {
    Matrix sum = Matrix::Zero(A.dim(), A.dim());
    for (size_t i = 0; i < A.size(); ++i) sum += roots[i] * B.effect(j).matrix() * roots[i];
    outcomes.emplace_back(B.label(j), Effect::trusted(std::move(sum)));
  }
  return Observable::trusted(std::move(outcomes));
}

std::vector<double> distribution(const DensityState& rho, const Observable& A, Tolerance tol) {
  if (rho.dim() != A.dim()) {
    throw DimensionError("distribution: state and observable dimensions differ");
  }
  std::vector<double> out;
  out.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    out.push_back(occurrence_prob(rho, A.effect(i), tol));
  }
  return out;
}

double then_probability(const DensityState& rho, const Observable& A,
                        const std::vector<OutcomeLabel>& X, const Observable& B,
                        const std::vector<OutcomeLabel>& Y, Tolerance tol) {
  const Observable joint = seq_prod_obs(A, B, tol);
  std::vector<OutcomeLabel> event;
  event.reserve(X.size() * Y.size());
  for (const auto& x : X) {
    (void)A.at(x);
    for (const auto& y : Y) {
      (void)B.at(y);
      event.push_back(pair_label(x, y));
    }
  }
  return occurrence_prob(rho, event_effect(joint, event), tol);
}

Observable post_process(const StochasticMatrix& nu, const Observable& A, Tolerance tol) {
  if (nu.rows() != A.labels()) {
    throw ArgumentError("post_process: matrix rows do not match the outcome labels");
  }
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(nu.cols().size());
  for (size_t y = 0; y < nu.cols().size(); ++y) {
    Matrix sum = Matrix::Zero(A.dim(), A.dim());
    for (size_t x = 0; x < A.size(); ++x) sum += nu.entry(x, y) * A.effect(x).matrix();
    outcomes.emplace_back(nu.cols()[y], Effect::trusted(std::move(sum)));
  }
  (void)tol;
  return Observable::trusted(std::move(outcomes));
}

std::vector<double> random_measure(const Observable& A) {
  std::vector<double> out;
  out.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    out.push_back(A.effect(i).matrix().trace().real() / static_cast<double>(A.dim()));
  }
  return out;
}

Observable tensor_obs(const Observable& A1, const Observable& A2) {
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(A1.size() * A2.size());
  for (size_t i = 0; i < A1.size(); ++i)
    for (size_t j = 0; j < A2.size(); ++j)
      outcomes.emplace_back(pair_label(A1.label(i), A2.label(j)),
                            Effect::trusted(tensor(A1.effect(i).matrix(), A2.effect(j).matrix())));
  return Observable::trusted(std::move(outcomes));
}

Observable reduced_obs(const Observable& A, DimPair dims, Factor side) {
  if (A.dim() != dims.total()) {
    throw DimensionError("reduced_obs: observable dimension does not factor as n1*n2");
  }
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) {
    outcomes.emplace_back(A.label(i), reduced_effect(A.effect(i), dims, side));
  }
  return Observable::trusted(std::move(outcomes));
}

Observable coarse_grain(const Observable& B, const Surjection& f) {
  const std::set<OutcomeLabel> dom(f.domain().begin(), f.domain().end());
  const std::set<OutcomeLabel> obs_labels(B.labels().begin(), B.labels().end());
  if (dom != obs_labels) {
    throw ArgumentError("coarse_grain: surjection domain does not match the outcome set");
  }
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(f.codomain().size());
  for (const auto& y : f.codomain()) {
    outcomes.emplace_back(y, event_effect(B, f.fiber(y)));
  }
  return Observable::trusted(std::move(outcomes));
}

}  // namespace qmc
