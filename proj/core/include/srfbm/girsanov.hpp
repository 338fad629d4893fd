#pragma once

#include <span>
#include <vector>

#include "srfbm/fbm.hpp"

namespace srfbm {

/// Normalization of the martingale kernel and its quadratic-variation
/// constant: <M>_t = C_H t^{2(1-H)}.
struct GirsanovConstants {
  double hurst = 0.5;
  double c1 = 1.0;
  double quadratic_variation = 1.0;  // C_H
};

GirsanovConstants girsanov_constants(double hurst);

/// Drift strength and unit direction of the tilted measure.
class TiltSpec {
 public:
  /// Drift along e_1.
  TiltSpec(double lambda, int dim);
  /// Throws std::domain_error unless |direction| = 1 within 1e-12 and lambda >= 0.
  TiltSpec(double lambda, std::vector<double> direction);

  double lambda() const noexcept { return lambda_; }
  std::span<const double> direction() const noexcept { return direction_; }

 private:
  double lambda_;
  std::vector<double> direction_;
};

/// c1 s^{1/2-H} (t-s)^{1/2-H} on 0 < s < t, zero elsewhere.
double kernel_w(double t, double s, double hurst);

/// Midpoint-rule value of M at grid time t_m:
/// sum_i u_i sum_{k<m} w(t_m, (t_k + t_{k+1})/2) (X_{k+1,i} - X_{k,i}).
double martingale_M(const Path& path, std::span<const double> direction, int upto_index, double hurst);

/// Midpoint kernel values w(t_m, s_k), k < m, for reuse across many paths.
std::vector<double> martingale_weights(const TimeGrid& grid, int upto_index, double hurst);

/// M at t_m with m = weights.size(), from precomputed martingale_weights.
double martingale_M(const Path& path, std::span<const double> direction, std::span<const double> weights);

/// Same as martingale_M, at the grid point equal to `upto`; throws std::invalid_argument if
/// upto is not a grid point with index >= 1.
double martingale_M_at(const Path& path, std::span<const double> direction, double upto, double hurst);

/// log Q_T(lambda M) = lambda M_T - lambda^2 C_H T^{2(1-H)} / 2, with the
/// quadratic variation taken in closed form.
double log_rn_weight(const TiltSpec& tilt, double martingale_value, double horizon, double hurst);

double rn_weight(const TiltSpec& tilt, double martingale_value, double horizon, double hurst);

/// X_k + lambda t_k u.
Path add_drift(const Path& path, const TiltSpec& tilt);

/// Case-matched drift strength that balances the two rate bounds.
/// Requires T > e and beta > 0.
double lambda_star(int dim, double hurst, double beta, double horizon);

/// Above this Hurst index the midpoint rule for M loses accuracy near the
/// kernel singularities.
inline constexpr double kMidpointAccuracyHurstLimit = 0.8;

}  // namespace srfbm
