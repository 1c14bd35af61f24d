#pragma once

// The acceptance battery. Each suite returns counts and a pass/fail verdict; the walk
// invariants suite audits every walk executed by suites 1-4.

#include "shadowlp/experiments.hpp"

#include <mutex>

namespace shadowlp {

struct SuiteResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::string detail;
  double seconds = 0;
};

struct VerifyConfig {
  std::uint64_t seed = 20240611;
  std::vector<int> suites;  // empty: all
  int threads = 1;
  bool invert_ratio_test = false;  // fault injection for the mutation smoke test
  CenterFamily pivot_centers = CenterFamily::Origin;

  bool selected(int id) const { return suites.empty() || std::find(suites.begin(), suites.end(), id) != suites.end(); }
};

/// Thread-safe audit of walks: locality, validity, contiguity, and 2 pi coverage of sweeps.
class WalkAudit {
 public:
  void record(const PointSet<double>& pts, const WalkOutcome<double>& w);
  WalkHook hook();

  std::size_t walks() const { return walks_; }
  std::size_t sweeps() const { return sweeps_; }
  std::size_t failures() const { return failures_; }
  double worst_sweep_error() const { return worst_sweep_error_; }
  const std::string& first_failure() const { return first_failure_; }

 private:
  mutable std::mutex mutex_;
  std::size_t walks_ = 0, sweeps_ = 0, failures_ = 0;
  double worst_sweep_error_ = 0;
  std::string first_failure_;
};

SuiteResult suite_oracle_equivalence(const VerifyConfig& cfg, WalkAudit& audit);
SuiteResult suite_phase1_statistics(const VerifyConfig& cfg, WalkAudit& audit);
SuiteResult suite_pivot_growth(const VerifyConfig& cfg, WalkAudit& audit);
SuiteResult suite_section_counting(const VerifyConfig& cfg, WalkAudit& audit);
SuiteResult suite_d2_growth(const VerifyConfig& cfg);
SuiteResult suite_angular_viewpoints(const VerifyConfig& cfg);
SuiteResult suite_walk_invariants(const WalkAudit& audit);
SuiteResult suite_determinism(const VerifyConfig& cfg);

/// The config of suite 3 (and of its first cell, for suite 8).
ExperimentConfig pivot_growth_config(const VerifyConfig& cfg);

struct VerifyReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
  std::string json() const;
};

/// Runs the selected suites in order; `progress` receives each result as it completes.
VerifyReport run_verify(const VerifyConfig& cfg, const std::function<void(const SuiteResult&)>& progress = {});

/// One line per suite: "PASS 1 oracle-equivalence: ..." or "FAIL ...".
std::string format_line(const SuiteResult& r);

}  // namespace shadowlp
