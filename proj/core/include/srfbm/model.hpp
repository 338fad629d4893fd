#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "srfbm/fbm.hpp"

namespace srfbm {

/// (d, H, beta, T, n): the identity of one experiment point.
struct ModelParams {
  int dim = 1;
  double hurst = 0.5;
  double beta = 1.0;
  double horizon = 1.0;
  int steps = 1;

  /// Throws std::domain_error on d < 1, H outside (0,1), beta < 0, T <= 0 or n < 1.
  void validate() const;

  HurstModel hurst_model() const { return HurstModel::make(hurst, dim); }
  TimeGrid grid() const { return TimeGrid{horizon, steps}; }

  /// Model on a grid of step dt.
  static ModelParams with_step(int dim, double hurst, double beta, double horizon, double dt);
};

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string stable_digest(const std::string& text);

/// Canonical "key=value;" rendering used for digests. Doubles are printed
/// with round-trip precision.
std::string canonical(const ModelParams& model);

/// One emitted observation of a chain or estimator run.
struct RunRecord {
  std::string config_digest;
  std::size_t point_index = 0;
  ModelParams point;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  std::size_t sample_index = 0;
  long long step = 0;

  double r_gyration = 0.0;
  double energy = 0.0;
  double end_to_end_sq = 0.0;
  double acceptance_rate = 0.0;
  double pcn_step = 0.0;

  /// log Q_T(lambda M) on the recorded path when it was sampled under a tilt.
  std::optional<double> log_rn_weight;
};

}  // namespace srfbm
