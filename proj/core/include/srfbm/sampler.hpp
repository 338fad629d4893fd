#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "srfbm/energy.hpp"
#include "srfbm/fbm.hpp"
#include "srfbm/model.hpp"
#include "srfbm/rng.hpp"

namespace srfbm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings of one preconditioned Crank-Nicolson chain targeting
/// exp(-beta E) times the fBm law.
struct ChainConfig {
  ModelParams model;
  double pcn_step = 0.25;
  int burn_in = 2000;
  /// Steps between emitted records; 0 selects max(1, n / 8).
  int thin = 0;
  int total_samples = 512;
  std::uint64_t seed = 0;
  double adapt_target = 0.3;
  /// Burn-in steps between step-size updates.
  int adapt_interval = 50;
  /// Steps between full energy recomputations.
  int audit_interval = 1000;
  GeneratorOptions generator;

  /// Throws ConfigError on out-of-range settings.
  void validate() const;
  int effective_thin() const noexcept;
};

inline constexpr double kMinPcnStep = 1e-4;

/// Noise, its path and energy; path and energy always correspond to xi.
struct ChainState {
  NoiseVector xi;
  Path path;
  EnergyValue energy;
  long long step_count = 0;
  long long accept_count = 0;
};

ChainState initial_state(const ChainConfig& config, Engine& engine);

/// sqrt(1 - s^2) xi + s eta with fresh standard normal eta. Leaves the
/// standard Gaussian law on noise space invariant.
NoiseVector pcn_propose(const NoiseVector& xi, double step, Engine& engine);

/// One Metropolis step, accepting with probability min(1, exp(-beta (E' - E))).
/// Returns whether the proposal was accepted.
bool pcn_step(ChainState& state, const ChainConfig& config, double step, Engine& engine);

struct ChainRun {
  std::vector<RunRecord> records;
  double frozen_step = 0.0;
  double acceptance_rate = 0.0;  // after burn-in
};

/// Burn-in with multiplicative step adaptation toward adapt_target, then a
/// frozen step and total_samples records spaced effective_thin() apart.
/// Deterministic given config.
ChainRun run_chain(const ChainConfig& config);

std::string canonical(const ChainConfig& config);

}  // namespace srfbm
