// Outcome labels, canonical product labels and surjections between outcome
// sets. Shared by observables, instruments and the part-of machinery.
#ifndef QMC_OUTCOMES_HPP
#define QMC_OUTCOMES_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "qmc/types.hpp"

namespace qmc {

using OutcomeLabel = std::string;

// Canonical label for a product outcome: "(x,y)".
OutcomeLabel pair_label(const OutcomeLabel& x, const OutcomeLabel& y);
OutcomeLabel tuple_label(const std::vector<OutcomeLabel>& parts);

// All product labels of the given outcome sets, first factor major.
std::vector<OutcomeLabel> product_labels(const std::vector<std::vector<OutcomeLabel>>& factors);

// "0", "1", ... with an optional prefix.
std::vector<OutcomeLabel> index_labels(int count, const std::string& prefix = "");

// A total map onto its codomain. Domain and codomain keep caller order so
// everything built from a surjection iterates deterministically.
class Surjection {
 public:
  static Surjection make(std::vector<OutcomeLabel> domain, std::vector<OutcomeLabel> codomain,
                         std::unordered_map<OutcomeLabel, OutcomeLabel> assignment);

  static Surjection identity(const std::vector<OutcomeLabel>& labels);
  static Surjection constant(const std::vector<OutcomeLabel>& domain, OutcomeLabel target);

  // g after f: maps f's domain through f then g.
  static Surjection compose(const Surjection& g, const Surjection& f);

  const std::vector<OutcomeLabel>& domain() const noexcept { return domain_; }
  const std::vector<OutcomeLabel>& codomain() const noexcept { return codomain_; }

  const OutcomeLabel& operator()(const OutcomeLabel& x) const;
  // Preimage of y in domain order.
  std::vector<OutcomeLabel> fiber(const OutcomeLabel& y) const;

  bool is_bijection() const noexcept { return domain_.size() == codomain_.size(); }

 private:
  Surjection() = default;
  std::vector<OutcomeLabel> domain_;
  std::vector<OutcomeLabel> codomain_;
  std::unordered_map<OutcomeLabel, OutcomeLabel> map_;
};

}  // namespace qmc

#endif  // QMC_OUTCOMES_HPP
