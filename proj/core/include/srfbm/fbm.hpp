#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "srfbm/rng.hpp"

namespace srfbm {

/// Hurst index and spatial dimension of a d-dimensional fBm with independent
/// coordinates.
struct HurstModel {
  double hurst = 0.5;
  int dim = 1;

  /// Throws std::domain_error unless 0 < hurst < 1 and dim >= 1.
  static HurstModel make(double hurst, int dim);
};

/// Uniform discretization of [0, T] with n steps.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);

  /// Grid with the given step; the step count is round(T / dt) and must
  /// reproduce T to within 1e-9 relative.
  static TimeGrid with_step(double horizon, double dt);

  double horizon() const noexcept { return horizon_; }
  int steps() const noexcept { return steps_; }
  double dt() const noexcept { return dt_; }
  double time(int k) const noexcept { return k == steps_ ? horizon_ : k * dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  int steps_;
  double dt_;
};

/// A d-dimensional trajectory sampled at the n + 1 grid points. Stored
/// row-major: values(k, i) is coordinate i at time t_k.
class Path {
 public:
  Path(TimeGrid grid, int dim);

  const TimeGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }
  int points() const noexcept { return grid_.steps() + 1; }

  double operator()(int k, int i) const { return values_[index(k, i)]; }
  double& operator()(int k, int i) { return values_[index(k, i)]; }

  std::span<const double> point(int k) const {
    return {values_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<double> point(int k) {
    return {values_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  std::size_t index(int k, int i) const noexcept {
    return static_cast<std::size_t>(k) * dim_ + i;
  }

  TimeGrid grid_;
  int dim_;
  std::vector<double> values_;
};

/// i.i.d. standard normal coordinates driving a Path, `rows` x `dim`,
/// row-major. `rows` is the coloring backend's noise length: n for the dense
/// factor, 2n for circulant embedding.
class NoiseVector {
 public:
  NoiseVector(int rows, int dim) : rows_(rows), dim_(dim), xi_(static_cast<std::size_t>(rows) * dim) {}

  int rows() const noexcept { return rows_; }
  int dim() const noexcept { return dim_; }

  double operator()(int k, int i) const { return xi_[static_cast<std::size_t>(k) * dim_ + i]; }
  double& operator()(int k, int i) { return xi_[static_cast<std::size_t>(k) * dim_ + i]; }

  std::span<const double> values() const noexcept { return xi_; }
  std::span<double> values() noexcept { return xi_; }

 private:
  int rows_;
  int dim_;
  std::vector<double> xi_;
};

enum class Backend { automatic, cholesky, circulant };

const char* to_string(Backend backend) noexcept;

struct GeneratorOptions {
  Backend backend = Backend::automatic;
  /// automatic selects circulant embedding from this n upward (powers of two).
  int circulant_min_steps = 512;
  /// Largest n for which a dense Cholesky factor is built.
  int dense_step_limit = 4096;
  /// Relative magnitude below which a negative circulant eigenvalue forces
  /// the dense fallback.
  double negative_eigen_tolerance = 1e-10;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance E[B_s B_t] of standard one-dimensional fBm.
double fbm_covariance(double s, double t, double hurst);

/// Autocovariance at lag k of fractional Gaussian noise with step dt.
double fgn_autocovariance(long long lag, double hurst, double dt);

/// A fixed linear map from standard normal noise to one coordinate's fGn
/// increments: increments = L z with L L^T the n x n fGn Toeplitz matrix.
class Coloring {
 public:
  virtual ~Coloring() = default;

  virtual Backend backend() const noexcept = 0;
  virtual int steps() const noexcept = 0;
  virtual int noise_rows() const noexcept = 0;

  /// z.size() == noise_rows(), increments.size() == steps().
  virtual void apply(std::span<const double> z, std::span<double> increments) const = 0;
};

/// Returns the cached coloring for (H, n, dt, backend), building it on first
/// use. Safe to call concurrently.
std::shared_ptr<const Coloring> coloring_for(double hurst, int steps, double dt,
                                             const GeneratorOptions& options = {});

/// Number of noise rows noise_to_path expects for this model and grid.
int noise_rows(const HurstModel& model, const TimeGrid& grid, const GeneratorOptions& options = {});

NoiseVector draw_noise(const HurstModel& model, const TimeGrid& grid, Engine& engine,
                       const GeneratorOptions& options = {});

/// Deterministic and linear in xi. Coordinates are colored independently and
/// cumulatively summed from the origin.
Path noise_to_path(const NoiseVector& xi, const HurstModel& model, const TimeGrid& grid,
                   const GeneratorOptions& options = {});

/// Bit-identical output for identical (model, grid, seed, options).
Path sample_fbm(const HurstModel& model, const TimeGrid& grid, std::uint64_t seed,
                const GeneratorOptions& options = {});

}  // namespace srfbm
