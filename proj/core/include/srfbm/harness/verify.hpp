#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "srfbm/estimators.hpp"
#include "srfbm/harness/checks.hpp"

namespace srfbm::harness {

struct VerifyOptions {
  int workers = 1;
  std::uint64_t seed = 20240601;
  std::ostream* out = nullptr;  // one line per check as it completes

  // Fault-injection hooks for testing the suite itself.
  LogWeightFn log_weight = log_rn_weight;
  double claim_slack = kClaimSlack;
  int claim_steps = 256;
};

struct VerifyReport {
  std::vector<CheckResult> results;
  bool all_passed() const;
};

/// Runs, in order: exact formulas, overlap oracles, generator covariance and
/// backend equivalence, RN mean-one, the beta = 0 chain, the pathwise claim
/// sweep and the exponent table audit.
VerifyReport run_verify(const VerifyOptions& options = {});

}  // namespace srfbm::harness
