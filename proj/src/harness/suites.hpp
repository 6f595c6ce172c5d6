#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectral/scalar.hpp"

namespace spectral::harness {

struct TrialFailure {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;  // reproduction seed of the failing trial
  std::string message;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  std::vector<TrialFailure> failures;          // ordered by trial index
  std::map<std::string, double> metrics;       // max over trials
  bool ok() const { return trials > 0 && failures.empty(); }
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;  // suite default when unset
  std::optional<int> threads;           // overrides SPECTRAL_PENCIL_THREADS
  ToleranceConfig tol;
  double dt = 1e-3;
  double horizon = 1.0;
};

/// The named property suites behind `verify`. Trials run independently (and
/// in parallel) on per-trial seeds; reports merge deterministically by trial
/// index, so the thread count never changes the output.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, const SuiteOptions& opts);

/// Parallelism resolved from SPECTRAL_PENCIL_THREADS (capped at the OpenMP
/// maximum); 1 means the serial reference path.
int max_threads();

}  // namespace spectral::harness
