#pragma once

#include <string>
#include <vector>

#include "hyp/config.hpp"

namespace hyp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifySummary {
  std::vector<CriterionResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

/// Runs the full invariant suite on the reference tree models (free groups
/// of rank 2 and 3) at the pinned default schedule and tolerances, writing
/// one CSV artifact per block under cfg.out_dir. Only out_dir, cache_dir,
/// threads and seed are taken from the configuration, so the suite checks
/// the same contract in every run.
VerifySummary run_verify_all(const RunConfig& cfg);

}  // namespace hyp
