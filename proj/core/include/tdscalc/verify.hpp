#pragma once

#include "tdscalc/json_io.hpp"

namespace tdsc {

struct CaseResult {
  std::string id;
  std::string status;  // pass | fail | error
  json witness;        // null unless the case produced one
  double time_ms = 0;
};

struct Report {
  std::string suite;
  uint64_t seed = 0;
  int samples = 0;
  std::vector<CaseResult> cases;

  int count(const std::string& status) const;
  bool all_pass() const { return count("pass") == (int)cases.size(); }
  /// Deterministic serialization: cases sorted by id, no timings unless asked.
  json to_json(bool with_timings = false) const;
};

/// Suites: algebra, forms, def21, tds, psi, counterexamples, all.
/// Deterministic under a fixed seed. Instance counts never drop below the
/// thresholds of the acceptance criteria, whatever `samples` says.
Report run_suite(const std::string& suite, uint64_t seed, int samples,
                 const Rational& blackbox_tol);

const std::vector<std::string>& suite_names();

}  // namespace tdsc
