#include "qmc/outcomes.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qmc {

OutcomeLabel pair_label(const OutcomeLabel& x, const OutcomeLabel& y) {
  return "(" + x + "," + y + ")";
}

OutcomeLabel tuple_label(const std::vector<OutcomeLabel>& parts) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ",";
    os << parts[i];
  }
  os << ")";
  return os.str();
}

std::vector<OutcomeLabel> index_labels(int count, const std::string& prefix) {
  std::vector<OutcomeLabel> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<OutcomeLabel> product_labels(const std::vector<std::vector<OutcomeLabel>>& factors) {
  std::vector<std::vector<OutcomeLabel>> tuples{{}};
  for (const auto& factor : factors) {
    std::vector<std::vector<OutcomeLabel>> next;
    next.reserve(tuples.size() * factor.size());
    for (const auto& prefix : tuples) {
      for (const auto& label : factor) {
        auto t = prefix;
        t.push_back(label);
        next.push_back(std::move(t));
      }
    }
    tuples = std::move(next);
  }
  std::vector<OutcomeLabel> out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) out.push_back(tuple_label(t));
  return out;
}

Surjection Surjection::make(std::vector<OutcomeLabel> domain, std::vector<OutcomeLabel> codomain,
                            std::unordered_map<OutcomeLabel, OutcomeLabel> assignment) {
  Surjection s;
  std::set<OutcomeLabel> dom_set(domain.begin(), domain.end());
  if (dom_set.size() != domain.size()) {
    throw ArgumentError("surjection: duplicate domain labels");
  }
  std::set<OutcomeLabel> cod_set(codomain.begin(), codomain.end());
  if (cod_set.size() != codomain.size()) {
    throw ArgumentError("surjection: duplicate codomain labels");
  }
  std::set<OutcomeLabel> hit;
  for (const auto& x : domain) {
    auto it = assignment.find(x);
    if (it == assignment.end()) {
      throw ArgumentError("surjection: no value assigned to domain label '" + x + "'");
    }
    if (!cod_set.count(it->second)) {
      throw ArgumentError("surjection: '" + x + "' maps outside the codomain");
    }
    hit.insert(it->second);
  }
  if (hit.size() != codomain.size()) {
    throw ValidationError("surjection: not every codomain label is reached");
  }
  s.domain_ = std::move(domain);
  s.codomain_ = std::move(codomain);
  s.map_ = std::move(assignment);
  return s;
}

Surjection Surjection::identity(const std::vector<OutcomeLabel>& labels) {
  std::unordered_map<OutcomeLabel, OutcomeLabel> assignment;
  for (const auto& l : labels) assignment[l] = l;
  return make(labels, labels, std::move(assignment));
}

Surjection Surjection::constant(const std::vector<OutcomeLabel>& domain, OutcomeLabel target) {
  std::unordered_map<OutcomeLabel, OutcomeLabel> assignment;
  for (const auto& l : domain) assignment[l] = target;
  return make(domain, {std::move(target)}, std::move(assignment));
}

Surjection Surjection::compose(const Surjection& g, const Surjection& f) {
  std::unordered_map<OutcomeLabel, OutcomeLabel> assignment;
  for (const auto& x : f.domain()) assignment[x] = g(f(x));
  return make(f.domain(), g.codomain(), std::move(assignment));
}

const OutcomeLabel& Surjection::operator()(const OutcomeLabel& x) const {
  auto it = map_.find(x);
  if (it == map_.end()) {
    throw ArgumentError("surjection: label '" + x + "' is not in the domain");
  }
  return it->second;
}

std::vector<OutcomeLabel> Surjection::fiber(const OutcomeLabel& y) const {
  std::vector<OutcomeLabel> out;
  for (const auto& x : domain_) {
    if ((*this)(x) == y) out.push_back(x);
  }
  return out;
}

}  // namespace qmc
