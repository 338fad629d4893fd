#include "srfbm/estimators.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "srfbm/energy.hpp"
#include "srfbm/observables.hpp"
#include "srfbm/parallel.hpp"
#include "srfbm/rng.hpp"
#include "srfbm/scaling.hpp"
#include "srfbm/stats.hpp"

namespace srfbm {

namespace {

void require_samples(std::size_t m) {
  if (m < 2) throw std::invalid_argument("estimator: need at least two samples");
}

// Below this the plain mean of exp(x) would lose precision to underflow.
constexpr double kPlainMeanFloor = -700.0;

}  // namespace

const char* to_string(EstimatorMethod method) noexcept {
  return method == EstimatorMethod::naive ? "naive" : "importance";
}

const char* to_string(TailSide side) noexcept { return side == TailSide::below ? "below" : "above"; }

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) { return mix64(seed, index); }

EstimateWithError estimate_from_log_weights(std::span<const double> log_weights, EstimatorMethod method) {
  const auto lme = log_mean_exp(log_weights);
  EstimateWithError e;
  e.method = method;
  e.sample_size = log_weights.size();
  e.log_value = lme.log_mean;
  e.log_std_error = lme.log_std_error;
  e.relative_std_error = lme.relative_std_error;

  double top = -std::numeric_limits<double>::infinity();
  for (double x : log_weights) top = std::max(top, x);
  if (top == -std::numeric_limits<double>::infinity()) {
    e.value = 0.0;
    e.std_error = 0.0;
    e.relative_std_error = 0.0;
    return e;
  }
  if (top > kPlainMeanFloor && top < 700.0) {
    // Plain mean keeps per-sample monotonicity (e.g. in beta) exact.
    std::vector<double> w(log_weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i]);
    const auto s = mean_and_error(w);
    e.value = s.mean;
    e.std_error = s.std_error;
  } else {
    e.value = lme.mean;
    e.std_error = lme.std_error;
  }
  return e;
}

std::vector<PathSummary> summarize_paths(const ModelParams& model, std::size_t m, std::uint64_t seed,
                                         const EstimatorOptions& options) {
  model.validate();
  const auto hurst = model.hurst_model();
  const auto grid = model.grid();
  std::vector<PathSummary> out(m);
  parallel_for(m, options.workers, [&](std::size_t i) {
    const Path path = sample_fbm(hurst, grid, sample_seed(seed, i), options.generator);
    out[i] = {energy_fast(path).value, radius_of_gyration(path), end_to_end_sq(path), 0.0};
  });
  return out;
}

std::vector<PathSummary> summarize_tilted_paths(const ModelParams& model, const TiltSpec& tilt, std::size_t m,
                                                std::uint64_t seed, const EstimatorOptions& options) {
  model.validate();
  if (static_cast<int>(tilt.direction().size()) != model.dim) {
    throw std::invalid_argument("tilted paths: tilt direction dimension does not match d");
  }
  const auto hurst = model.hurst_model();
  const auto grid = model.grid();
  const auto weights = martingale_weights(grid, grid.steps(), model.hurst);
  std::vector<PathSummary> out(m);
  parallel_for(m, options.workers, [&](std::size_t i) {
    const Path drifted = add_drift(sample_fbm(hurst, grid, sample_seed(seed, i), options.generator), tilt);
    const double log_q = tilt.lambda() == 0.0
                             ? 0.0
                             : log_rn_weight(tilt, martingale_M(drifted, tilt.direction(), weights),
                                             grid.horizon(), model.hurst);
    out[i] = {energy_fast(drifted).value, radius_of_gyration(drifted), end_to_end_sq(drifted), log_q};
  });
  return out;
}

EstimateWithError estimate_ZT_naive(const ModelParams& model, std::size_t m, std::uint64_t seed,
                                    const EstimatorOptions& options) {
  require_samples(m);
  const auto paths = summarize_paths(model, m, seed, options);
  std::vector<double> logw(m);
  for (std::size_t i = 0; i < m; ++i) logw[i] = -model.beta * paths[i].energy;
  return estimate_from_log_weights(logw, EstimatorMethod::naive);
}

EstimateWithError estimate_ZT_importance(const ModelParams& model, const TiltSpec& tilt, std::size_t m,
                                         std::uint64_t seed, const EstimatorOptions& options) {
  require_samples(m);
  const auto paths = summarize_tilted_paths(model, tilt, m, seed, options);
  std::vector<double> logw(m);
  for (std::size_t i = 0; i < m; ++i) logw[i] = -model.beta * paths[i].energy - paths[i].log_rn_weight;
  return estimate_from_log_weights(logw, EstimatorMethod::importance);
}

EstimateWithError estimate_tail(const ModelParams& model, double r, TailSide side, std::size_t m,
                                std::uint64_t seed, const EstimatorOptions& options) {
  require_samples(m);
  if (!(r > 0.0)) throw std::domain_error("estimate_tail: r must be positive");
  const auto paths = summarize_paths(model, m, seed, options);
  std::vector<double> logw(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool in = side == TailSide::below ? paths[i].r_gyration <= r : paths[i].r_gyration >= r;
    logw[i] = in ? -model.beta * paths[i].energy : -std::numeric_limits<double>::infinity();
  }
  return estimate_from_log_weights(logw, EstimatorMethod::naive);
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_power_law: need at least three points");
  std::set<double> seen;
  std::vector<double> x, y;
  for (const auto& [t, v] : points) {
    if (!(t > 0.0)) throw std::invalid_argument("fit_power_law: abscissae must be positive");
    if (!(v > 0.0)) throw std::invalid_argument("fit_power_law: values must be positive");
    if (!seen.insert(t).second) throw std::invalid_argument("fit_power_law: duplicate abscissa");
    x.push_back(std::log(t));
    y.push_back(std::log(v));
  }
  const auto fit = least_squares(x, y);
  return {fit.slope, fit.intercept, fit.slope_std_error, fit.r_squared};
}

ClaimCheck check_claim(const Path& path, double slack) {
  ClaimCheck c;
  c.energy = energy_fast(path).value;
  c.r_gyration = radius_of_gyration(path);
  const double T = path.grid().horizon();
  const double lt = lemma_constants(path.dim()).c_lower_tail;
  c.bound = slack * 2.0 * lt * T * T / std::pow(c.r_gyration + 1.0, path.dim());
  c.margin = c.energy - c.bound;
  c.holds = c.margin >= 0.0;
  return c;
}

}  // namespace srfbm
