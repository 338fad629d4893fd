#include "srfbm/girsanov.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "srfbm/scaling.hpp"

namespace srfbm {

namespace {

void require_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::domain_error("Hurst index must lie in (0,1), got " + std::to_string(hurst));
  }
}

void warn_midpoint_accuracy(double hurst) {
  static std::once_flag once;
  std::call_once(once, [hurst] {
    std::cerr << "srfbm: warning: H = " << hurst << " > " << kMidpointAccuracyHurstLimit
              << "; the midpoint rule for the martingale M is inaccurate near the kernel singularities\n";
  });
}

}  // namespace

GirsanovConstants girsanov_constants(double hurst) {
  require_hurst(hurst);
  const double H = hurst;
  GirsanovConstants c;
  c.hurst = H;
  c.c1 = 1.0 / (2.0 * H * std::beta(1.5 - H, 0.5 + H));
  c.quadratic_variation =
      std::tgamma(1.5 - H) / (4.0 * H * (1.0 - H) * std::tgamma(0.5 + H) * std::tgamma(2.0 - 2.0 * H));
  return c;
}

TiltSpec::TiltSpec(double lambda, int dim) : lambda_(lambda), direction_(static_cast<std::size_t>(dim), 0.0) {
  if (dim < 1) throw std::domain_error("TiltSpec: dimension must be >= 1");
  if (!(lambda >= 0.0)) throw std::domain_error("TiltSpec: lambda must be nonnegative");
  direction_[0] = 1.0;
}

TiltSpec::TiltSpec(double lambda, std::vector<double> direction) : lambda_(lambda), direction_(std::move(direction)) {
  if (!(lambda >= 0.0)) throw std::domain_error("TiltSpec: lambda must be nonnegative");
  if (direction_.empty()) throw std::domain_error("TiltSpec: empty direction");
  double norm2 = 0.0;
  for (double u : direction_) norm2 += u * u;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw std::domain_error("TiltSpec: direction must be a unit vector");
}

double kernel_w(double t, double s, double hurst) {
  require_hurst(hurst);
  if (!(t > 0.0)) throw std::domain_error("kernel_w: t must be positive");
  if (!(s > 0.0 && s < t)) return 0.0;
  const double e = 0.5 - hurst;
  return girsanov_constants(hurst).c1 * std::pow(s * (t - s), e);
}

double martingale_M(const Path& path, std::span<const double> direction, int upto_index, double hurst) {
  require_hurst(hurst);
  if (static_cast<int>(direction.size()) != path.dim()) {
    throw std::invalid_argument("martingale_M: direction dimension does not match path");
  }
  if (upto_index < 1 || upto_index > path.grid().steps()) {
    throw std::invalid_argument("martingale_M: upto must be a grid point t_m with m >= 1");
  }
  if (hurst > kMidpointAccuracyHurstLimit) warn_midpoint_accuracy(hurst);

  if (hurst == 0.5) {
    // w = 1: the sum telescopes to u . (X_m - X_0) with X_0 = 0.
    const auto x = path.point(upto_index);
    double projected = 0.0;
    for (int i = 0; i < path.dim(); ++i) projected += direction[i] * x[i];
    return projected;
  }
  return martingale_M(path, direction, martingale_weights(path.grid(), upto_index, hurst));
}

std::vector<double> martingale_weights(const TimeGrid& grid, int upto_index, double hurst) {
  require_hurst(hurst);
  if (upto_index < 1 || upto_index > grid.steps()) {
    throw std::invalid_argument("martingale_weights: upto must be a grid point t_m with m >= 1");
  }
  const double t = grid.time(upto_index);
  const double c1 = girsanov_constants(hurst).c1;
  const double e = 0.5 - hurst;
  std::vector<double> w(static_cast<std::size_t>(upto_index));
  for (int k = 0; k < upto_index; ++k) {
    const double s = 0.5 * (grid.time(k) + grid.time(k + 1));
    w[k] = c1 * std::pow(s, e) * std::pow(t - s, e);
  }
  return w;
}

double martingale_M(const Path& path, std::span<const double> direction, std::span<const double> weights) {
  if (static_cast<int>(direction.size()) != path.dim()) {
    throw std::invalid_argument("martingale_M: direction dimension does not match path");
  }
  if (weights.empty() || static_cast<int>(weights.size()) > path.grid().steps()) {
    throw std::invalid_argument("martingale_M: weight count must be in [1, n]");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const auto a = path.point(static_cast<int>(k));
    const auto b = path.point(static_cast<int>(k) + 1);
    double projected = 0.0;
    for (int i = 0; i < path.dim(); ++i) projected += direction[i] * (b[i] - a[i]);
    total += weights[k] * projected;
  }
  return total;
}

double martingale_M_at(const Path& path, std::span<const double> direction, double upto, double hurst) {
  const auto& grid = path.grid();
  const double position = upto / grid.dt();
  const long long m = std::llround(position);
  if (m < 1 || m > grid.steps() || std::abs(position - static_cast<double>(m)) > 1e-9 * std::max(1.0, position)) {
    throw std::invalid_argument("martingale_M: time " + std::to_string(upto) + " is not a grid point t_m, m >= 1");
  }
  return martingale_M(path, direction, static_cast<int>(m), hurst);
}

double log_rn_weight(const TiltSpec& tilt, double martingale_value, double horizon, double hurst) {
  if (!(horizon > 0.0)) throw std::domain_error("rn_weight: horizon must be positive");
  const double lambda = tilt.lambda();
  return lambda * martingale_value - rate_I2_star(hurst, lambda, horizon);
}

double rn_weight(const TiltSpec& tilt, double martingale_value, double horizon, double hurst) {
  return std::exp(log_rn_weight(tilt, martingale_value, horizon, hurst));
}

Path add_drift(const Path& path, const TiltSpec& tilt) {
  if (static_cast<int>(tilt.direction().size()) != path.dim()) {
    throw std::invalid_argument("add_drift: tilt direction dimension does not match path");
  }
  Path drifted = path;
  const auto u = tilt.direction();
  for (int k = 0; k < path.points(); ++k) {
    const double shift = tilt.lambda() * path.grid().time(k);
    auto x = drifted.point(k);
    for (int i = 0; i < path.dim(); ++i) x[i] += shift * u[i];
  }
  return drifted;
}

double lambda_star(int dim, double hurst, double beta, double horizon) {
  require_hurst(hurst);
  if (!(beta > 0.0)) throw std::domain_error("lambda_star: beta must be positive");
  if (!(horizon > std::numbers::e)) throw std::domain_error("lambda_star: horizon T must exceed e");
  const double d = dim;
  const double H = hurst;
  const double T = horizon;
  switch (classify_regime(dim, hurst)) {
    case Regime::dh_lt_1: {
      const double den = 3.0 - (d + 2.0) * H;
      return std::pow(beta, (1.0 - H) / den) * std::pow(T, -(1.0 - 2.0 * H) * (1.0 - H) / den);
    }
    case Regime::dh_eq_1_bm2d:
      return beta >= 1.0 ? std::cbrt(beta) : std::pow(beta, 0.25);
    case Regime::dh_eq_1_small_h:
      return std::sqrt(beta) * std::pow(T, H - 0.5) * std::sqrt(std::log(T));
    case Regime::dh_gt_1_small_h:
      return std::sqrt(beta) * std::pow(T, H - 0.5);
    case Regime::dh_gt_1_large_h:
      return std::cbrt(beta) * std::pow(T, (2.0 * H - 1.0) / 3.0);
  }
  throw std::logic_error("unreachable regime");
}

}  // namespace srfbm
