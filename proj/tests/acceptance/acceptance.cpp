#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "srfbm/harness/checks.hpp"
#include "srfbm/parallel.hpp"
#include "srfbm/rng.hpp"

using namespace srfbm;
using namespace srfbm::harness;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::function<std::vector<CheckResult>()> run;
};

std::filesystem::path scratch_root() {
  const char* base = std::getenv("SRFBM_SCRATCH");
  return base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "srfbm-acceptance";
}

template <class... Rs>
void append(std::vector<CheckResult>& out, Rs&&... rs) {
  (out.push_back(std::forward<Rs>(rs)), ...);
}

void append_all(std::vector<CheckResult>& out, std::vector<CheckResult> rs) {
  for (auto& r : rs) out.push_back(std::move(r));
}

std::vector<Criterion> criteria(std::uint64_t seed, int workers) {
  std::vector<Criterion> c;
  c.push_back({1, "exact formulas and exponent table", [] {
                 std::vector<CheckResult> out;
                 append(out, check_exact_formulas(), check_exponent_table());
                 return out;
               }});
  c.push_back({2, "overlap kernel", [=] { return check_overlap(10'000'000, mix64(seed, 2)); }});
  c.push_back({3, "generator fidelity", [=] {
                 std::vector<CheckResult> out;
                 for (double h : {0.3, 0.5, 0.7}) {
                   for (Backend b : {Backend::cholesky, Backend::circulant}) {
                     append(out, check_coloring_exact(h, 256, b),
                            check_generator_covariance(h, 256, 10000, b, mix64(seed, 3, out.size()), workers));
                   }
                 }
                 return out;
               }});
  c.push_back({4, "Girsanov suite", [=] {
                 std::vector<CheckResult> out;
                 std::uint64_t k = 0;
                 for (double h : {0.3, 0.5, 0.7}) {
                   for (double lambda : {0.25, 0.5}) {
                     append_all(out, check_girsanov_tilt(h, lambda, 1.0, 256, 100000, mix64(seed, 4, k++), workers));
                   }
                 }
                 for (double h : {0.3, 0.5, 0.7}) {
                   append(out, check_martingale_variance(h, 1.0, 2048, 20000, 0.05, mix64(seed, 4, k++), workers));
                 }
                 append(out, check_martingale_variance(0.75, 1.0, 2048, 20000, 0.10, mix64(seed, 4, k++), workers));
                 return out;
               }});
  c.push_back({5, "pathwise claim", [=] {
                 return std::vector<CheckResult>{
                     check_claim_sweep({1, 2, 3}, {0.3, 0.5, 0.7}, 16.0, 256, 1000, 0.9, mix64(seed, 5), workers)};
               }});
  c.push_back({6, "lower-tail bound", [=] {
                 return check_lower_tail(0.5, 1.0, 8.0, 256, 100000, {1.0, 2.0, 4.0}, mix64(seed, 6), workers);
               }});
  c.push_back({7, "partition function growth", [=] {
                 return std::vector<CheckResult>{check_partition_growth(0.5, 1.0, {4.0, 8.0, 16.0, 32.0}, 0.25, 20000,
                                                                        0.8, 1.2, mix64(seed, 7), workers)};
               }});
  c.push_back({8, "radius exponent", [=] {
                 const auto dir = scratch_root() / "criterion-8";
                 std::vector<CheckResult> out;
                 append(out,
                        check_chain_exponent(0.5, 1.0, {8.0, 16.0, 32.0, 64.0}, 0.25, 8, 512, 0.85, 1.15,
                                             mix64(seed, 8, 1), workers, dir / "h05"),
                        check_chain_exponent(0.3, 1.0, {8.0, 16.0, 32.0, 64.0}, 0.25, 8, 512, 0.72, 1.01,
                                             mix64(seed, 8, 2), workers, dir / "h03"));
                 return out;
               }});
  c.push_back({9, "sampler oracle", [=] {
                 return std::vector<CheckResult>{check_sampler_oracle(4.0, 32, 4, 50000, 1'000'000, mix64(seed, 9), workers)};
               }});
  c.push_back({10, "determinism", [=] {
                 return std::vector<CheckResult>{check_determinism(workers, scratch_root() / "criterion-10")};
               }});
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10"};
  std::vector<int> only;
  int workers = default_workers();
  std::uint64_t seed = 20240611;
  app.add_option("--criterion", only, "Run only these criteria")->check(CLI::Range(1, 10));
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Master seed");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (const auto& c : criteria(seed, workers)) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    const auto results = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool passed = !results.empty();
    for (const auto& r : results) passed = passed && r.passed;
    all = all && passed;
    std::cout << (passed ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " (" << results.size()
              << " checks, " << secs << " s)\n";
    for (const auto& r : results) std::cout << "    " << format(r) << '\n';
    std::cout.flush();
  }
  return all ? 0 : 1;
}
