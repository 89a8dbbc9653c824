#include "qmc/parts.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qmc {

namespace {

// ---------------------------------------------------------------------------
// Generic block-sum backtracking over additive items (effect or Choi
// matrices). Parent items are assigned depth-first, in descending-trace
// order, to child blocks in index order; the first solution wins.
// ---------------------------------------------------------------------------

struct BlockSearch {
  const std::vector<Matrix>* targets = nullptr;  // child blocks
  const std::vector<Matrix>* items = nullptr;    // parent pieces
  std::vector<int> order;                        // item visit order
  std::vector<int> assignment;                   // item -> block
  std::vector<Matrix> sums;
  std::vector<int> block_fill;
  double prune_eps = 0.0;
  double leaf_bound = 0.0;
  double residual = 0.0;

  bool feasible(int block) const {
    const Matrix gap = (*targets)[block] - sums[block];
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (gap + gap.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -prune_eps;
  }

  bool run(size_t depth) {
    const size_t m = items->size();
    const size_t k = targets->size();
    if (depth == m) {
      double worst = 0.0;
      for (size_t b = 0; b < k; ++b) {
        if (block_fill[b] == 0) return false;  // not surjective
        worst = std::max(worst, ((*targets)[b] - sums[b]).norm());
        if (worst > leaf_bound) return false;
      }
      residual = worst;
      return true;
    }
    int empty_blocks = 0;
    for (size_t b = 0; b < k; ++b) {
      if (block_fill[b] == 0) ++empty_blocks;
    }
    if (static_cast<size_t>(empty_blocks) > m - depth) return false;
    const int item = order[depth];
    for (size_t b = 0; b < k; ++b) {
      sums[b] += (*items)[item];
      ++block_fill[b];
      if (feasible(static_cast<int>(b)) && run(depth + 1)) {
        assignment[item] = static_cast<int>(b);
        return true;
      }
      --block_fill[b];
      sums[b] -= (*items)[item];
    }
    return false;
  }
};

std::optional<std::pair<Surjection, double>> block_sum_search(
    const std::vector<Matrix>& targets, const std::vector<OutcomeLabel>& target_labels,
    const std::vector<Matrix>& items, const std::vector<OutcomeLabel>& item_labels,
    double prune_eps, double leaf_bound) {
  if (targets.empty() || items.size() < targets.size()) return std::nullopt;

  BlockSearch search;
  search.targets = &targets;
  search.items = &items;
  search.order.resize(items.size());
  for (size_t i = 0; i < items.size(); ++i) search.order[i] = static_cast<int>(i);
  std::stable_sort(search.order.begin(), search.order.end(), [&](int a, int b) {
    return items[a].trace().real() > items[b].trace().real();
  });
  search.assignment.assign(items.size(), -1);
  search.sums.assign(targets.size(), Matrix::Zero(targets[0].rows(), targets[0].cols()));
  search.block_fill.assign(targets.size(), 0);
  search.prune_eps = prune_eps;
  search.leaf_bound = leaf_bound;

  if (!search.run(0)) return std::nullopt;

  std::unordered_map<OutcomeLabel, OutcomeLabel> map;
  for (size_t i = 0; i < items.size(); ++i) {
    map[item_labels[i]] = target_labels[static_cast<size_t>(search.assignment[i])];
  }
  return std::make_pair(Surjection::make(item_labels, target_labels, std::move(map)),
                        search.residual);
}

std::vector<Matrix> effect_matrices(const Observable& A) {
  std::vector<Matrix> out;
  out.reserve(A.size());
  for (size_t i = 0; i < A.size(); ++i) out.push_back(A.effect(i).matrix());
  return out;
}

std::vector<Matrix> choi_matrices(const Instrument& I) {
  std::vector<Matrix> out;
  out.reserve(I.size());
  for (size_t i = 0; i < I.size(); ++i) out.push_back(I.op(i).choi());
  return out;
}

// Greedy multiset matching under an absolute Frobenius bound.
bool multisets_match(const std::vector<Matrix>& a, const std::vector<Matrix>& b, double bound) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool matched = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if ((x - b[j]).norm() <= bound) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

double obs_leaf_bound(int dim, double eps) { return eps * std::sqrt(static_cast<double>(dim)); }
double choi_leaf_bound(int dim, double eps) {
  return eps * static_cast<double>(dim) * static_cast<double>(dim);
}

bool same_mm_context(const MeasurementModel& a, const MeasurementModel& b, Tolerance tol) {
  return a.base_dim() == b.base_dim() && a.probe_dim() == b.probe_dim() &&
         approx_eq(a.eta().matrix(), b.eta().matrix(), tol) &&
         operations_equal(a.nu().op(), b.nu().op(), tol);
}

double coarse_grain_residual(const Observable& child, const Observable& parent,
                             const Surjection& map) {
  double worst = 0.0;
  for (const auto& x : child.labels()) {
    const Matrix sum = event_effect(parent, map.fiber(x)).matrix();
    worst = std::max(worst, (child.at(x).matrix() - sum).norm());
  }
  return worst;
}

double coarse_grain_residual_instr(const Instrument& child, const Instrument& parent,
                                   const Surjection& map) {
  double worst = 0.0;
  for (const auto& x : child.labels()) {
    Matrix sum = Matrix::Zero(child.at(x).choi().rows(), child.at(x).choi().cols());
    for (const auto& y : map.fiber(x)) sum += parent.at(y).choi();
    worst = std::max(worst, (child.at(x).choi() - sum).norm());
  }
  return worst;
}

}  // namespace

int entity_level(const Entity& e) { return static_cast<int>(e.index()) + 1; }

int entity_base_dim(const Entity& e) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MeasurementModel>) {
          return v.base_dim();
        } else {
          return v.dim();
        }
      },
      e);
}

const char* entity_kind_name(const Entity& e) {
  switch (e.index()) {
    case 0: return "observable";
    case 1: return "instrument";
    default: return "mm";
  }
}

double replay_residual(const PartCertificate& cert, Tolerance tol) {
  const Entity& child = cert.child;
  const Entity& parent = cert.parent;
  if (std::holds_alternative<Observable>(child)) {
    const auto& a = std::get<Observable>(child);
    if (std::holds_alternative<Observable>(parent)) {
      return coarse_grain_residual(a, std::get<Observable>(parent), cert.map);
    }
    if (std::holds_alternative<Instrument>(parent)) {
      return coarse_grain_residual(a, measured_observable(std::get<Instrument>(parent)),
                                   cert.map);
    }
    return coarse_grain_residual(
        a, model_observable(std::get<MeasurementModel>(parent), tol), cert.map);
  }
  if (std::holds_alternative<Instrument>(child)) {
    const auto& i = std::get<Instrument>(child);
    if (std::holds_alternative<Instrument>(parent)) {
      return coarse_grain_residual_instr(i, std::get<Instrument>(parent), cert.map);
    }
    if (std::holds_alternative<MeasurementModel>(parent)) {
      return coarse_grain_residual_instr(
          i, model_instrument(std::get<MeasurementModel>(parent), tol), cert.map);
    }
    throw ArgumentError("certificate replays an instrument against an observable");
  }
  // MM child: comparison happens between probe observables.
  const auto& m1 = std::get<MeasurementModel>(child);
  if (!std::holds_alternative<MeasurementModel>(parent)) {
    throw ArgumentError("certificate replays a model against a lower-type entity");
  }
  const auto& m2 = std::get<MeasurementModel>(parent);
  return coarse_grain_residual(m1.probe_observable(), m2.probe_observable(), cert.map);
}

std::optional<PartCertificate> find_part_map(const Observable& child, const Observable& parent,
                                             Tolerance tol) {
  if (child.dim() != parent.dim()) {
    throw DimensionError("find_part_map: observables act on different spaces");
  }
  const double leaf = obs_leaf_bound(child.dim(), tol.eps());
  auto found = block_sum_search(effect_matrices(child), child.labels(),
                                effect_matrices(parent), parent.labels(),
                                std::max(tol.eps(), leaf), leaf);
  if (!found) return std::nullopt;
  return PartCertificate{child, parent, std::move(found->first), found->second};
}

std::optional<PartCertificate> find_part_map_instr(const Instrument& child,
                                                   const Instrument& parent, Tolerance tol) {
  if (child.dim() != parent.dim()) {
    throw DimensionError("find_part_map_instr: instruments act on different spaces");
  }
  const double leaf = choi_leaf_bound(child.dim(), tol.eps());
  auto found = block_sum_search(choi_matrices(child), child.labels(), choi_matrices(parent),
                                parent.labels(), std::max(tol.eps(), leaf), leaf);
  if (!found) return std::nullopt;
  return PartCertificate{child, parent, std::move(found->first), found->second};
}

std::optional<Surjection> find_part_map_exhaustive(const Observable& child,
                                                   const Observable& parent, Tolerance tol) {
  if (child.dim() != parent.dim()) {
    throw DimensionError("find_part_map_exhaustive: observables act on different spaces");
  }
  const size_t m = parent.size();
  const size_t k = child.size();
  if (k > m) return std::nullopt;
  const double bound = obs_leaf_bound(child.dim(), tol.eps());
  std::vector<size_t> digits(m, 0);
  while (true) {
    // Surjectivity, then fiber sums.
    std::vector<bool> hit(k, false);
    for (size_t i = 0; i < m; ++i) hit[digits[i]] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool h) { return h; })) {
      bool ok = true;
      for (size_t b = 0; b < k && ok; ++b) {
        Matrix sum = Matrix::Zero(child.dim(), child.dim());
        for (size_t i = 0; i < m; ++i) {
          if (digits[i] == b) sum += parent.effect(i).matrix();
        }
        ok = (child.effect(b).matrix() - sum).norm() <= bound;
      }
      if (ok) {
        std::unordered_map<OutcomeLabel, OutcomeLabel> map;
        for (size_t i = 0; i < m; ++i) map[parent.label(i)] = child.label(digits[i]);
        return Surjection::make(parent.labels(), child.labels(), std::move(map));
      }
    }
    size_t pos = m;
    while (pos-- > 0) {
      if (++digits[pos] < k) break;
      digits[pos] = 0;
      if (pos == 0) return std::nullopt;
    }
  }
}

PartResult part_of(const Entity& alpha, const Entity& beta, Tolerance tol) {
  if (entity_base_dim(alpha) != entity_base_dim(beta)) {
    throw DimensionError("part_of: entities act on different base spaces");
  }
  PartResult result;
  const int la = entity_level(alpha);
  const int lb = entity_level(beta);
  if (la > lb) {
    result.status = PartStatus::incomparable;
    result.detail = std::string(entity_kind_name(alpha)) + " cannot be part of a lower-type " +
                    entity_kind_name(beta);
    return result;
  }

  auto finish_obs = [&](const Observable& child, const Observable& parent_view) {
    auto cert = find_part_map(child, parent_view, tol);
    if (cert) {
      result.status = PartStatus::found;
      cert->parent = beta;  // certify against the original entity
      result.certificate = std::move(cert);
    }
  };

  if (std::holds_alternative<Observable>(alpha)) {
    const auto& a = std::get<Observable>(alpha);
    if (std::holds_alternative<Observable>(beta)) {
      finish_obs(a, std::get<Observable>(beta));
    } else if (std::holds_alternative<Instrument>(beta)) {
      finish_obs(a, measured_observable(std::get<Instrument>(beta)));
    } else {
      finish_obs(a, model_observable(std::get<MeasurementModel>(beta), tol));
    }
    return result;
  }

  if (std::holds_alternative<Instrument>(alpha)) {
    const auto& i = std::get<Instrument>(alpha);
    std::optional<PartCertificate> cert;
    if (std::holds_alternative<Instrument>(beta)) {
      cert = find_part_map_instr(i, std::get<Instrument>(beta), tol);
    } else {
      cert = find_part_map_instr(i, model_instrument(std::get<MeasurementModel>(beta), tol), tol);
      if (cert) cert->parent = beta;
    }
    if (cert) {
      result.status = PartStatus::found;
      result.certificate = std::move(cert);
    }
    return result;
  }

  // Model against model: the relation is defined only for models sharing
  // base, probe, probe state and interaction; it compares probe observables.
  const auto& m1 = std::get<MeasurementModel>(alpha);
  const auto& m2 = std::get<MeasurementModel>(beta);
  if (!same_mm_context(m1, m2, tol)) {
    result.status = PartStatus::incomparable;
    result.detail = "models differ outside the probe observable";
    return result;
  }
  auto cert = find_part_map(m1.probe_observable(), m2.probe_observable(), tol);
  if (cert) {
    result.status = PartStatus::found;
    result.certificate =
        PartCertificate{alpha, beta, std::move(cert->map), cert->residual};
  }
  return result;
}

bool equivalent(const Entity& alpha, const Entity& beta, Tolerance tol) {
  if (entity_base_dim(alpha) != entity_base_dim(beta)) {
    throw DimensionError("equivalent: entities act on different base spaces");
  }
  if (alpha.index() != beta.index()) return false;
  if (std::holds_alternative<Observable>(alpha)) {
    const auto& a = std::get<Observable>(alpha);
    const auto& b = std::get<Observable>(beta);
    return multisets_match(effect_matrices(a), effect_matrices(b),
                           obs_leaf_bound(a.dim(), tol.eps()));
  }
  if (std::holds_alternative<Instrument>(alpha)) {
    const auto& a = std::get<Instrument>(alpha);
    const auto& b = std::get<Instrument>(beta);
    return multisets_match(choi_matrices(a), choi_matrices(b),
                           choi_leaf_bound(a.dim(), tol.eps()));
  }
  const auto& m1 = std::get<MeasurementModel>(alpha);
  const auto& m2 = std::get<MeasurementModel>(beta);
  return same_mm_context(m1, m2, tol) &&
         multisets_match(effect_matrices(m1.probe_observable()),
                         effect_matrices(m2.probe_observable()),
                         obs_leaf_bound(m1.probe_dim(), tol.eps()));
}

void for_each_partition(int m, const std::function<void(const std::vector<int>&)>& visit) {
  if (m < 1) throw ArgumentError("for_each_partition: need at least one element");
  std::vector<int> rgs(m, 0);
  while (true) {
    visit(rgs);
    // Lexicographic successor of a restricted growth string.
    int pos = m - 1;
    for (; pos > 0; --pos) {
      int prefix_max = 0;
      for (int i = 0; i < pos; ++i) prefix_max = std::max(prefix_max, rgs[i]);
      if (rgs[pos] <= prefix_max) break;
    }
    if (pos == 0) return;
    ++rgs[pos];
    for (int i = pos + 1; i < m; ++i) rgs[i] = 0;
  }
}

std::vector<PartEntry> enumerate_parts(const Observable& parent, Tolerance tol,
                                       int max_outcomes) {
  const int m = static_cast<int>(parent.size());
  if (m > max_outcomes) {
    std::ostringstream os;
    os << "enumerate_parts: " << m << " outcomes exceed the cap of " << max_outcomes;
    throw ArgumentError(os.str());
  }
  const double bound = obs_leaf_bound(parent.dim(), tol.eps());
  std::vector<PartEntry> survivors;
  std::vector<std::vector<Matrix>> survivor_effects;
  for_each_partition(m, [&](const std::vector<int>& rgs) {
    const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<Matrix> sums(blocks, Matrix::Zero(parent.dim(), parent.dim()));
    for (int i = 0; i < m; ++i) sums[rgs[i]] += parent.effect(i).matrix();
    for (const auto& prior : survivor_effects) {
      if (multisets_match(prior, sums, bound)) return;
    }
    const auto block_labels = index_labels(blocks);
    std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
    outcomes.reserve(blocks);
    for (int b = 0; b < blocks; ++b) {
      outcomes.emplace_back(block_labels[b], Effect::trusted(sums[b]));
    }
    std::unordered_map<OutcomeLabel, OutcomeLabel> assignment;
    for (int i = 0; i < m; ++i) assignment[parent.label(i)] = block_labels[rgs[i]];
    survivors.push_back(PartEntry{
        Observable::trusted(std::move(outcomes)),
        Surjection::make(parent.labels(), block_labels, std::move(assignment))});
    survivor_effects.push_back(std::move(sums));
  });
  return survivors;
}

bool marginal_check(const Observable& B, const std::vector<Observable>& members,
                    Tolerance tol) {
  if (members.empty()) throw ArgumentError("marginal_check: no members given");
  size_t product_size = 1;
  for (const auto& member : members) product_size *= member.size();
  if (product_size != B.size()) {
    throw ArgumentError("marginal_check: joint outcome count does not match the product");
  }
  // Odometer over member outcome indices.
  const size_t n = members.size();
  std::vector<size_t> idx(n, 0);
  std::vector<std::vector<Matrix>> marginal_sums(n);
  for (size_t i = 0; i < n; ++i) {
    marginal_sums[i].assign(members[i].size(), Matrix::Zero(B.dim(), B.dim()));
  }
  while (true) {
    std::vector<OutcomeLabel> tuple(n);
    for (size_t i = 0; i < n; ++i) tuple[i] = members[i].label(idx[i]);
    const OutcomeLabel label = tuple_label(tuple);
    if (!B.contains(label)) {
      throw ArgumentError("marginal_check: joint lacks the product outcome " + label);
    }
    const Matrix& value = B.at(label).matrix();
    for (size_t i = 0; i < n; ++i) marginal_sums[i][idx[i]] += value;
    size_t pos = n;
    bool done = true;
    while (pos-- > 0) {
      if (++idx[pos] < members[pos].size()) {
        done = false;
        break;
      }
      idx[pos] = 0;
    }
    if (done) break;
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t x = 0; x < members[i].size(); ++x) {
      if (!approx_eq(marginal_sums[i][x], members[i].effect(x).matrix(), tol)) return false;
    }
  }
  return true;
}

Observable joint_from_common(const Observable& C, const std::vector<Surjection>& maps,
                             Tolerance tol) {
  if (maps.empty()) throw ArgumentError("joint_from_common: no maps given");
  const std::set<OutcomeLabel> parent_labels(C.labels().begin(), C.labels().end());
  std::vector<std::vector<OutcomeLabel>> codomains;
  codomains.reserve(maps.size());
  for (const auto& f : maps) {
    const std::set<OutcomeLabel> dom(f.domain().begin(), f.domain().end());
    if (dom != parent_labels) {
      throw ArgumentError("joint_from_common: map domain does not match the common outcome set");
    }
    codomains.push_back(f.codomain());
  }
  const auto labels = product_labels(codomains);
  std::unordered_map<OutcomeLabel, Matrix> buckets;
  for (const auto& l : labels) buckets.emplace(l, Matrix::Zero(C.dim(), C.dim()));
  for (size_t z = 0; z < C.size(); ++z) {
    std::vector<OutcomeLabel> tuple;
    tuple.reserve(maps.size());
    for (const auto& f : maps) tuple.push_back(f(C.label(z)));
    buckets.at(tuple_label(tuple)) += C.effect(z).matrix();
  }
  std::vector<std::pair<OutcomeLabel, Effect>> outcomes;
  outcomes.reserve(labels.size());
  for (const auto& l : labels) outcomes.emplace_back(l, Effect::trusted(buckets.at(l)));
  (void)tol;
  return Observable::trusted(std::move(outcomes));
}

Observable joint_for_commuting(const Observable& A, const Observable& B, Tolerance tol) {
  if (A.dim() != B.dim()) {
    throw DimensionError("joint_for_commuting: observables act on different spaces");
  }
  double worst = 0.0;
  for (size_t x = 0; x < A.size(); ++x) {
    for (size_t y = 0; y < B.size(); ++y) {
      const Matrix comm = A.effect(x).matrix() * B.effect(y).matrix() -
                          B.effect(y).matrix() * A.effect(x).matrix();
      worst = std::max(worst, comm.norm());
    }
  }
  if (worst > tol.eps() * std::sqrt(static_cast<double>(A.dim())) * 10.0) {
    std::ostringstream os;
    os << "joint_for_commuting: observables do not commute, max commutator norm " << worst;
    throw ValidationError(os.str());
  }
  return seq_prod_obs(A, B, tol);
}

WitnessAttempt make_witness(const Entity& parent, const std::vector<Entity>& members,
                            Tolerance tol) {
  WitnessAttempt attempt;
  std::vector<PartCertificate> certs;
  bool all_found = true;
  for (const auto& member : members) {
    PartResult r = part_of(member, parent, tol);
    if (r.status == PartStatus::found) {
      certs.push_back(*r.certificate);
    } else {
      all_found = false;
    }
    attempt.member_results.push_back(std::move(r));
  }
  if (all_found && !members.empty()) {
    attempt.witness = CoexistenceWitness{parent, std::move(certs)};
  }
  return attempt;
}

double joint_distribution(const CoexistenceWitness& witness, const DensityState& rho,
                          const std::vector<std::vector<OutcomeLabel>>& events,
                          Tolerance tol) {
  if (events.size() != witness.certificates.size()) {
    throw ArgumentError("joint_distribution: one event set per member is required");
  }
  if (std::holds_alternative<MeasurementModel>(witness.parent)) {
    throw ArgumentError("joint_distribution: witness parent must be an observable or instrument");
  }
  std::vector<OutcomeLabel> parent_labels;
  if (std::holds_alternative<Observable>(witness.parent)) {
    parent_labels = std::get<Observable>(witness.parent).labels();
  } else {
    parent_labels = std::get<Instrument>(witness.parent).labels();
  }
  for (const auto& cert : witness.certificates) {
    const double leaf =
        std::holds_alternative<Instrument>(cert.child)
            ? choi_leaf_bound(entity_base_dim(cert.child), tol.eps())
            : obs_leaf_bound(entity_base_dim(cert.child), tol.eps());
    if (replay_residual(cert, tol) > leaf) {
      throw ValidationError("joint_distribution: stale witness, certificate no longer replays");
    }
  }
  // Intersection fiber over the parent outcome set.
  std::vector<OutcomeLabel> fiber;
  for (const auto& z : parent_labels) {
    bool in_all = true;
    for (size_t i = 0; i < witness.certificates.size() && in_all; ++i) {
      const auto& image = witness.certificates[i].map(z);
      in_all = std::find(events[i].begin(), events[i].end(), image) != events[i].end();
    }
    if (in_all) fiber.push_back(z);
  }
  if (std::holds_alternative<Observable>(witness.parent)) {
    return occurrence_prob(rho, event_effect(std::get<Observable>(witness.parent), fiber), tol);
  }
  const auto& instr = std::get<Instrument>(witness.parent);
  double p = instr.event_op(fiber).apply(rho.matrix()).trace().real();
  if (p < 0.0 && p >= -tol.eps()) p = 0.0;
  if (p > 1.0 && p <= 1.0 + tol.eps()) p = 1.0;
  if (p < 0.0 || p > 1.0) {
    throw NumericError("joint_distribution: probability outside [0,1] beyond tolerance");
  }
  return p;
}

}  // namespace qmc
