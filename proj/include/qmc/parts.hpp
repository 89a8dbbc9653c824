// The part-of relation between measurement entities: certificate search,
// equivalence, enumeration of all parts of an observable, coexistence
// witnesses and joint distributions.
#ifndef QMC_PARTS_HPP
#define QMC_PARTS_HPP

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "qmc/measurement_models.hpp"

namespace qmc {

using Entity = std::variant<Observable, Instrument, MeasurementModel>;

// 1 = observable, 2 = instrument, 3 = measurement model.
int entity_level(const Entity& e);
int entity_base_dim(const Entity& e);
const char* entity_kind_name(const Entity& e);

// Proof that `child` is a coarse-graining of `parent` under `map`:
// replaying the map on the parent reproduces the child within tolerance.
struct PartCertificate {
  Entity child;
  Entity parent;
  Surjection map;
  double residual = 0.0;
};

// Max deviation between the child and the map replayed on the parent.
// Cross-type certificates replay against the parent's measured entity.
double replay_residual(const PartCertificate& cert, Tolerance tol = {});

// Backtracking search for a surjection f with child_x = sum of the parent
// effects in each fiber. Parent outcomes are assigned in descending-trace
// order and a partial fiber sum is abandoned as soon as child_x - sum has
// an eigenvalue below -eps. The first certificate in this order is
// returned.
std::optional<PartCertificate> find_part_map(const Observable& child, const Observable& parent,
                                             Tolerance tol = {});

// Instrument variant: fiber sums compared through Choi matrices.
std::optional<PartCertificate> find_part_map_instr(const Instrument& child,
                                                   const Instrument& parent, Tolerance tol = {});

// Exhaustive reference search: every assignment of parent outcomes to child
// outcomes in odometer order, surjectivity filtered, fiber sums checked
// directly. No pruning; kept as an independent route for cross-checking the
// backtracking search at small outcome counts.
std::optional<Surjection> find_part_map_exhaustive(const Observable& child,
                                                   const Observable& parent, Tolerance tol = {});

enum class PartStatus { found, not_found, incomparable };

struct PartResult {
  PartStatus status = PartStatus::not_found;
  std::optional<PartCertificate> certificate;
  std::string detail;
};

// Cross-type dispatch of the part-of relation. An entity can only be part
// of one of equal or higher type; comparisons against the higher entity go
// through its measured instrument/observable. Models are comparable only
// when they share base, probe, probe state and interaction.
PartResult part_of(const Entity& alpha, const Entity& beta, Tolerance tol = {});

// True iff a bijective part map exists in either direction: same outcome
// count and tolerance-matched effect/operation multisets.
bool equivalent(const Entity& alpha, const Entity& beta, Tolerance tol = {});

struct PartEntry {
  Observable part;
  Surjection map;
};

// All parts of an observable up to equivalence: set partitions of the
// outcome set are visited in restricted-growth-string order, block-sum
// observables formed, and duplicates removed by tolerance-matched effect
// multisets. Each survivor carries its inducing surjection.
std::vector<PartEntry> enumerate_parts(const Observable& parent, Tolerance tol = {},
                                       int max_outcomes = 8);

// True iff every member equals its marginal of B, where the outcome space
// of B is the canonical product of the members' outcome spaces.
bool marginal_check(const Observable& B, const std::vector<Observable>& members,
                    Tolerance tol = {});

// Joint observable h(C) with h(z) = (f_1(z),...,f_n(z)) on the product of
// the codomains; empty fibers receive the zero effect.
Observable joint_from_common(const Observable& C, const std::vector<Surjection>& maps,
                             Tolerance tol = {});

// Joint observable A o B for pairwise-commuting observables; the marginals
// are then exactly A and B. Rejects non-commuting input with the largest
// commutator norm in the message.
Observable joint_for_commuting(const Observable& A, const Observable& B, Tolerance tol = {});

struct CoexistenceWitness {
  Entity parent;
  std::vector<PartCertificate> certificates;
};

struct WitnessAttempt {
  std::optional<CoexistenceWitness> witness;
  std::vector<PartResult> member_results;
};

// Builds a coexistence witness by finding a part certificate for every
// member against the common parent.
WitnessAttempt make_witness(const Entity& parent, const std::vector<Entity>& members,
                            Tolerance tol = {});

// Probability of the intersection fiber: parent event = all outcomes whose
// image lies in every member's event set. Certificates are re-verified
// first; a witness that no longer replays is rejected as stale.
double joint_distribution(const CoexistenceWitness& witness, const DensityState& rho,
                          const std::vector<std::vector<OutcomeLabel>>& events,
                          Tolerance tol = {});

// Visits all set partitions of {0..m-1} as restricted growth strings in
// lexicographic order.
void for_each_partition(int m, const std::function<void(const std::vector<int>&)>& visit);

}  // namespace qmc

#endif  // QMC_PARTS_HPP
