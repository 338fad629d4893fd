#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "srfbm/fbm.hpp"
#include "srfbm/girsanov.hpp"
#include "srfbm/model.hpp"

namespace srfbm {

enum class EstimatorMethod { naive, importance };

const char* to_string(EstimatorMethod method) noexcept;

/// A Monte Carlo mean with its standard error, kept in log space as well
/// because exp(-beta E) underflows quickly in T.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t sample_size = 0;
  EstimatorMethod method = EstimatorMethod::naive;
  double log_value = 0.0;
  double log_std_error = 0.0;  // delta method
  double relative_std_error = 0.0;
};

struct EstimatorOptions {
  int workers = 1;
  GeneratorOptions generator;
};

/// Path i is sample_fbm(model, grid, mix64(seed, i)) in every estimator, so
/// estimators sharing a seed share their paths.
std::uint64_t sample_seed(std::uint64_t seed, std::size_t index);

/// Mean of exp(-beta E) over m fBm paths.
EstimateWithError estimate_ZT_naive(const ModelParams& model, std::size_t m, std::uint64_t seed,
                                    const EstimatorOptions& options = {});

/// Mean of exp(-beta E) / Q_T(lambda M) over m paths drawn with drift
/// lambda t u, with M evaluated on the drifted path.
EstimateWithError estimate_ZT_importance(const ModelParams& model, const TiltSpec& tilt, std::size_t m,
                                         std::uint64_t seed, const EstimatorOptions& options = {});

enum class TailSide { below, above };

const char* to_string(TailSide side) noexcept;

/// Mean of 1{R_T <= r} exp(-beta E) (below) or 1{R_T >= r} exp(-beta E) (above).
EstimateWithError estimate_tail(const ModelParams& model, double r, TailSide side, std::size_t m,
                                std::uint64_t seed, const EstimatorOptions& options = {});

/// Per-path quantities behind the estimators above.
struct PathSummary {
  double energy = 0.0;
  double r_gyration = 0.0;
  double end_to_end_sq = 0.0;
  double log_rn_weight = 0.0;  // zero for untilted paths
};

/// Paths under P, as drawn by estimate_ZT_naive and estimate_tail.
std::vector<PathSummary> summarize_paths(const ModelParams& model, std::size_t m, std::uint64_t seed,
                                         const EstimatorOptions& options = {});

/// Drifted paths under P^lambda, as drawn by estimate_ZT_importance.
std::vector<PathSummary> summarize_tilted_paths(const ModelParams& model, const TiltSpec& tilt, std::size_t m,
                                                std::uint64_t seed, const EstimatorOptions& options = {});

/// Aggregates per-sample log weights into an estimate.
EstimateWithError estimate_from_log_weights(std::span<const double> log_weights, EstimatorMethod method);

struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double exponent_std_error = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log y on log T. Needs >= 3 points, distinct T and y > 0.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

inline constexpr double kClaimSlack = 0.9;

struct ClaimCheck {
  bool holds = false;
  double margin = 0.0;  // energy - slack * 2 C_lt T^2 / (R_T + 1)^d
  double energy = 0.0;
  double bound = 0.0;   // slack * 2 C_lt T^2 / (R_T + 1)^d
  double r_gyration = 0.0;
};

/// Pathwise check of energy >= 2 C_lt T^2 / (R_T + 1)^d, scaled by `slack`.
ClaimCheck check_claim(const Path& path, double slack = kClaimSlack);

}  // namespace srfbm
