#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "srfbm/fbm.hpp"
#include "srfbm/girsanov.hpp"

namespace srfbm::harness {

/// Outcome of one invariant check. `measured` and `tolerance` are in the
/// units named by `detail`.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::string format(const CheckResult& result);

/// Closed-form constants: Girsanov constants at H = 1/2, C_lt(1), K_1..K_3,
/// beta_power branches and the I_2 rate examples.
CheckResult check_exact_formulas();

/// T-exponents of r_lower and r_upper against the published exponent table
/// for H in {1/4, 1/3, 1/2, 2/3, 3/4} and d = 1..6, compared as rationals.
CheckResult check_exponent_table();

/// Overlap volume by stratified Monte Carlo over (x_1, |x_perp|) with about
/// `points` jittered cells. Independent of the incomplete beta route.
double overlap_monte_carlo(int dim, double r, std::size_t points, std::uint64_t seed);

/// Closed forms in d = 1..3, Monte Carlo oracle in d = 2..6, exact zero for r >= 2.
std::vector<CheckResult> check_overlap(std::size_t mc_points, std::uint64_t seed);

/// Empirical covariance of `paths` fBm paths on [0, 1] with n steps against
/// fbm_covariance, entrywise within 4 standard errors.
CheckResult check_generator_covariance(double hurst, int steps, std::size_t paths, Backend backend,
                                       std::uint64_t seed, int workers);

/// L L^T of the coloring equals the fGn Toeplitz matrix to 1e-9 relative.
CheckResult check_coloring_exact(double hurst, int steps, Backend backend);

/// log Q_T as a function of (tilt, M_T, T, H); the production function is
/// log_rn_weight.
using LogWeightFn = std::function<double(const TiltSpec&, double, double, double)>;

/// E_P[Q_T] = 1 and E_{P^lambda}[1/Q_T] = 1 within 4 standard errors, plus
/// the I_2 identity E_{P^lambda}[log Q_T] = lambda^2 C_H T^{2-2H} / 2.
std::vector<CheckResult> check_girsanov_tilt(double hurst, double lambda, double horizon, int steps, std::size_t paths,
                                             std::uint64_t seed, int workers, const LogWeightFn& log_weight = log_rn_weight);

/// Var(M_T) / (C_H T^{2-2H}) - 1 within `relative_tolerance`.
CheckResult check_martingale_variance(double hurst, double horizon, int steps, std::size_t paths,
                                      double relative_tolerance, std::uint64_t seed, int workers);

/// At beta = 0 every pCN proposal is accepted and the chain mean of R_T
/// matches the i.i.d. fBm mean.
CheckResult check_beta_zero_chain(int samples, std::size_t iid_paths, std::uint64_t seed, int workers);

/// check_claim on `paths` fBm paths for every (d, H) in the product.
CheckResult check_claim_sweep(const std::vector<int>& dims, const std::vector<double>& hursts, double horizon,
                              int steps, std::size_t paths, double slack, std::uint64_t seed, int workers);

/// log q_below(r) <= -C_lt(1) beta T^2 / r + 4 se for each r, d = 1.
std::vector<CheckResult> check_lower_tail(double hurst, double beta, double horizon, int steps, std::size_t paths,
                                          const std::vector<double>& radii, std::uint64_t seed, int workers);

/// Slope of log(-log Z_T) against log T with the lambda_star importance
/// estimator, d = 1, required in [lo, hi].
CheckResult check_partition_growth(double hurst, double beta, const std::vector<double>& horizons, double dt,
                                   std::size_t paths, double lo, double hi, std::uint64_t seed, int workers);

/// Median-R_T exponent from a pCN sweep, d = 1, required in [lo, hi].
CheckResult check_chain_exponent(double hurst, double beta, const std::vector<double>& horizons, double dt,
                                 int chains, int samples, double lo, double hi, std::uint64_t seed, int workers,
                                 const std::filesystem::path& scratch);

/// Chain mean of R_T against self-normalized reweighting of i.i.d. paths.
CheckResult check_sampler_oracle(double horizon, int steps, int chains, int samples_per_chain,
                                 std::size_t iid_paths, std::uint64_t seed, int workers);

/// Identical data lines from two runs of one small sweep, and bit-identical
/// observables when a single replica is re-run from its recorded seed.
CheckResult check_determinism(int workers, const std::filesystem::path& scratch);

}  // namespace srfbm::harness
