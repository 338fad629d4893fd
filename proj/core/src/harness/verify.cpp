#include "srfbm/harness/verify.hpp"

#include <ostream>

#include "srfbm/rng.hpp"

namespace srfbm::harness {

bool VerifyReport::all_passed() const {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  auto add = [&](CheckResult r) {
    if (options.out) *options.out << format(r) << std::endl;
    report.results.push_back(std::move(r));
  };
  auto add_all = [&](std::vector<CheckResult> rs) {
    for (auto& r : rs) add(std::move(r));
  };
  const int w = options.workers;
  const auto seed = options.seed;

  add(check_exact_formulas());
  add_all(check_overlap(10'000'000, seed));

  for (double h : {0.3, 0.5, 0.7}) {
    add(check_coloring_exact(h, 256, Backend::cholesky));
    add(check_coloring_exact(h, 256, Backend::circulant));
    add(check_generator_covariance(h, 256, 4000, Backend::cholesky, mix64(seed, 1), w));
    add(check_generator_covariance(h, 256, 4000, Backend::circulant, mix64(seed, 2), w));
  }

  for (double h : {0.3, 0.5, 0.7}) {
    add_all(check_girsanov_tilt(h, 0.5, 1.0, 256, 20000, mix64(seed, 3), w, options.log_weight));
  }

  add(check_beta_zero_chain(20000, 20000, mix64(seed, 4), w));
  add(check_claim_sweep({1, 2, 3}, {0.3, 0.5, 0.7}, 16.0, options.claim_steps, 200, options.claim_slack,
                        mix64(seed, 5), w));
  add(check_exponent_table());
  return report;
}

}  // namespace srfbm::harness
