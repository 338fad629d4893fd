#include "srfbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "srfbm/observables.hpp"

namespace srfbm {

void ChainConfig::validate() const {
  try {
    model.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (!(pcn_step > 0.0 && pcn_step <= 1.0)) throw ConfigError("pcn_step must lie in (0,1]");
  if (burn_in < 1) throw ConfigError("burn_in must be >= 1");
  if (thin < 0) throw ConfigError("thin must be >= 0 (0 selects n/8)");
  if (total_samples < 1) throw ConfigError("total_samples must be >= 1");
  if (!(adapt_target > 0.0 && adapt_target < 1.0)) throw ConfigError("adapt_target must lie in (0,1)");
  if (adapt_interval < 1) throw ConfigError("adapt_interval must be >= 1");
  if (audit_interval < 1) throw ConfigError("audit_interval must be >= 1");
}

int ChainConfig::effective_thin() const noexcept { return thin > 0 ? thin : std::max(1, model.steps / 8); }

std::string canonical(const ChainConfig& config) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << canonical(config.model) << "pcn_step=" << config.pcn_step << ";burn_in=" << config.burn_in
     << ";thin=" << config.effective_thin() << ";samples=" << config.total_samples << ";seed=" << config.seed
     << ";adapt_target=" << config.adapt_target << ";adapt_interval=" << config.adapt_interval
     << ";backend=" << to_string(config.generator.backend) << ';';
  return os.str();
}

ChainState initial_state(const ChainConfig& config, Engine& engine) {
  const auto model = config.model.hurst_model();
  const auto grid = config.model.grid();
  NoiseVector xi = draw_noise(model, grid, engine, config.generator);
  Path path = noise_to_path(xi, model, grid, config.generator);
  const EnergyValue energy = energy_fast(path);
  return ChainState{std::move(xi), std::move(path), energy, 0, 0};
}

NoiseVector pcn_propose(const NoiseVector& xi, double step, Engine& engine) {
  if (!(step > 0.0 && step <= 1.0)) throw std::domain_error("pcn_propose: step must lie in (0,1]");
  const double keep = std::sqrt(1.0 - step * step);
  NoiseVector proposal(xi.rows(), xi.dim());
  fill_standard_normal(engine, proposal.values());
  const auto in = xi.values();
  auto out = proposal.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = keep * in[k] + step * out[k];
  return proposal;
}

bool pcn_step(ChainState& state, const ChainConfig& config, double step, Engine& engine) {
  NoiseVector proposal = pcn_propose(state.xi, step, engine);
  Path path = noise_to_path(proposal, config.model.hurst_model(), config.model.grid(), config.generator);
  const EnergyValue energy = energy_fast(path);

  const double log_ratio = -config.model.beta * (energy.value - state.energy.value);
  // Uniform is drawn unconditionally so the random stream does not depend on
  // the energy comparison.
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
  const bool accept = log_ratio >= 0.0 || std::log(u) < log_ratio;

  ++state.step_count;
  if (accept) {
    state.xi = std::move(proposal);
    state.path = std::move(path);
    state.energy = energy;
    ++state.accept_count;
  }
  return accept;
}

ChainRun run_chain(const ChainConfig& config) {
  config.validate();
  Engine engine = make_engine(config.seed);
  ChainState state = initial_state(config, engine);

  double step = config.pcn_step;
  long long window_accepts = 0;
  for (int k = 1; k <= config.burn_in; ++k) {
    if (pcn_step(state, config, step, engine)) ++window_accepts;
    if (k % config.adapt_interval == 0) {
      const double rate = static_cast<double>(window_accepts) / config.adapt_interval;
      step = std::min(1.0, step * std::exp(rate - config.adapt_target));
      if (step < kMinPcnStep) {
        throw ConfigError("step-size adaptation drove pcn_step below " + std::to_string(kMinPcnStep) +
                          " (acceptance " + std::to_string(rate) + ")");
      }
      window_accepts = 0;
    }
  }

  const double frozen = step;
  const std::string digest = stable_digest(canonical(config));
  const int thin = config.effective_thin();
  const long long accepts_at_freeze = state.accept_count;
  const long long steps_at_freeze = state.step_count;

  ChainRun run;
  run.frozen_step = frozen;
  run.records.reserve(static_cast<std::size_t>(config.total_samples));
  long long since_audit = 0;
  for (int sample = 0; sample < config.total_samples; ++sample) {
    for (int k = 0; k < thin; ++k) {
      pcn_step(state, config, frozen, engine);
      if (++since_audit == config.audit_interval) {
        since_audit = 0;
        const double fresh = energy_fast(state.path).value;
        if (std::abs(fresh - state.energy.value) > 1e-9 * std::max(1.0, std::abs(fresh))) {
          throw std::logic_error("run_chain: cached energy diverged from recomputation");
        }
      }
    }
    RunRecord rec;
    rec.config_digest = digest;
    rec.point = config.model;
    rec.seed = config.seed;
    rec.sample_index = static_cast<std::size_t>(sample);
    rec.step = state.step_count;
    rec.r_gyration = radius_of_gyration(state.path);
    rec.energy = state.energy.value;
    rec.end_to_end_sq = end_to_end_sq(state.path);
    rec.acceptance_rate = static_cast<double>(state.accept_count - accepts_at_freeze) /
                          static_cast<double>(state.step_count - steps_at_freeze);
    rec.pcn_step = frozen;
    run.records.push_back(std::move(rec));
  }
  run.acceptance_rate = run.records.empty() ? 0.0 : run.records.back().acceptance_rate;
  return run;
}

}  // namespace srfbm
