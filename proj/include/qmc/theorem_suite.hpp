// The verification suite: every identity the library implements is checked
// on seeded random instances at pinned thresholds, and the results are
// emitted as a machine-readable report. Check ids follow the catalog
// labels (thm-*, lemma-*, cor-*, eq-*, example-*) plus a few core
// invariants of the numerical substrate.
#ifndef QMC_THEOREM_SUITE_HPP
#define QMC_THEOREM_SUITE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmc {

struct SuiteOptions {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_outcomes = 8;
};

struct CheckResult {
  std::string id;
  std::string citation;
  std::string status;  // pass | fail | flagged
  double residual = 0.0;
  double runtime_ms = 0.0;
  std::string note;
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<CheckResult> checks;
  int passed = 0;
  int failed = 0;
  int flagged = 0;
};

std::vector<std::string> theorem_suite_check_ids();

SuiteReport run_theorem_suite(const SuiteOptions& options);

// Runs one check by id; empty optional if the id is unknown.
std::optional<CheckResult> run_single_check(const std::string& id, const SuiteOptions& options);

// Deterministic JSON text: stable key order, residuals with six significant
// digits. Timings vary between runs and are only included on request.
std::string emit_report(const SuiteReport& report, bool include_timings = false);

}  // namespace qmc

#endif  // QMC_THEOREM_SUITE_HPP
