#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "srfbm/estimators.hpp"
#include "srfbm/fbm.hpp"
#include "srfbm/model.hpp"

namespace srfbm::harness {

enum class Mode { mcmc, naive, importance, tails, verify };

const char* to_string(Mode mode) noexcept;

/// Parse failure; what() starts with "line N:" when a line is at fault.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  explicit ParseError(const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_ = 0;
};

struct SweepConfig {
  Mode mode = Mode::mcmc;
  std::vector<int> dims;
  std::vector<double> hursts;
  std::vector<double> betas;
  std::vector<double> horizons;
  double dt = 0.25;
  int replicas = 8;
  std::uint64_t master_seed = 1;
  std::string output = "srfbm-out";

  // Chain settings (mode = mcmc).
  double pcn_step = 0.25;
  int burn_in = 2000;
  int thin = 0;
  int samples = 512;
  double adapt_target = 0.3;

  // Estimator settings (naive, importance, tails).
  std::size_t mc_samples = 10000;
  std::optional<double> lambda;  // empty: lambda_star per point
  std::vector<double> radii;     // tails only
  TailSide side = TailSide::below;

  Backend backend = Backend::automatic;

  /// Throws ParseError naming the offending key.
  void validate() const;
};

/// One cell of the sweep grid.
struct SweepPoint {
  std::size_t index = 0;
  ModelParams model;
  std::optional<double> radius;  // tails mode
};

/// Cartesian product in the order d, H, beta, T (, r), last index fastest.
std::vector<SweepPoint> expand_grid(const SweepConfig& config);

/// Flat "key = value" text; '#' starts a comment, lists are comma separated.
SweepConfig parse_config(std::string_view text);

SweepConfig load_config(const std::string& path);

/// Key=value rendering of every setting, the input of the sweep digest.
std::string canonical(const SweepConfig& config);

/// Key reference with defaults, for --help.
std::string config_reference();

}  // namespace srfbm::harness
