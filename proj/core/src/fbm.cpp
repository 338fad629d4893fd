#include "srfbm/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

namespace srfbm {

HurstModel HurstModel::make(double hurst, int dim) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::domain_error("Hurst index must lie in (0,1), got " + std::to_string(hurst));
  }
  if (dim < 1) throw std::domain_error("dimension must be >= 1, got " + std::to_string(dim));
  return HurstModel{hurst, dim};
}

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps), dt_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::domain_error("horizon T must be positive and finite");
  }
  if (steps < 1) throw std::domain_error("step count n must be >= 1");
  dt_ = horizon / steps;
}

TimeGrid TimeGrid::with_step(double horizon, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("step dt must be positive");
  const double ratio = horizon / dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw std::domain_error("horizon " + std::to_string(horizon) + " is not a multiple of dt " +
                            std::to_string(dt));
  }
  return TimeGrid{horizon, static_cast<int>(steps)};
}

Path::Path(TimeGrid grid, int dim)
    : grid_(grid), dim_(dim), values_(static_cast<std::size_t>(grid.steps() + 1) * dim, 0.0) {
  if (dim < 1) throw std::domain_error("dimension must be >= 1");
}

const char* to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::automatic: return "automatic";
    case Backend::cholesky: return "cholesky";
    case Backend::circulant: return "circulant";
  }
  return "?";
}

namespace {

void require_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::domain_error("Hurst index must lie in (0,1), got " + std::to_string(hurst));
  }
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> fgn_row(double hurst, int steps, double dt) {
  std::vector<double> row(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) row[k] = fgn_autocovariance(k, hurst, dt);
  return row;
}

class CholeskyColoring final : public Coloring {
 public:
  CholeskyColoring(double hurst, int steps, double dt) : steps_(steps) {
    const auto row = fgn_row(hurst, steps, dt);
    Eigen::MatrixXd cov(steps, steps);
    for (int i = 0; i < steps; ++i) {
      for (int j = 0; j < steps; ++j) cov(i, j) = row[std::abs(i - j)];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw GeneratorError("fGn covariance is not numerically positive definite (n=" +
                           std::to_string(steps) + ")");
    }
    factor_ = llt.matrixL();
  }

  Backend backend() const noexcept override { return Backend::cholesky; }
  int steps() const noexcept override { return steps_; }
  int noise_rows() const noexcept override { return steps_; }

  void apply(std::span<const double> z, std::span<double> increments) const override {
    Eigen::Map<const Eigen::VectorXd> in(z.data(), steps_);
    Eigen::Map<Eigen::VectorXd> out(increments.data(), steps_);
    out.noalias() = factor_.triangularView<Eigen::Lower>() * in;
  }

 private:
  int steps_;
  Eigen::MatrixXd factor_;
};

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Real symmetric square root of the 2n x 2n circulant embedding,
// S = F^* diag(sqrt(lambda)) F / (2n). The first n entries of S z are the
// increments.
class CirculantColoring final : public Coloring {
 public:
  CirculantColoring(std::vector<double> sqrt_eigen, int steps)
      : steps_(steps), size_(2 * steps), scale_(std::move(sqrt_eigen)) {
    std::vector<double> real(size_);
    std::vector<std::complex<double>> spectrum(size_ / 2 + 1);
    std::lock_guard lock(fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(size_, real.data(), reinterpret_cast<fftw_complex*>(spectrum.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_1d(size_, reinterpret_cast<fftw_complex*>(spectrum.data()), real.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (forward_ == nullptr || backward_ == nullptr) throw GeneratorError("FFTW planning failed");
  }

  ~CirculantColoring() override {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  CirculantColoring(const CirculantColoring&) = delete;
  CirculantColoring& operator=(const CirculantColoring&) = delete;

  Backend backend() const noexcept override { return Backend::circulant; }
  int steps() const noexcept override { return steps_; }
  int noise_rows() const noexcept override { return size_; }

  void apply(std::span<const double> z, std::span<double> increments) const override {
    std::vector<double> real(z.begin(), z.end());
    std::vector<std::complex<double>> spectrum(size_ / 2 + 1);
    fftw_execute_dft_r2c(forward_, real.data(), reinterpret_cast<fftw_complex*>(spectrum.data()));
    for (std::size_t k = 0; k < spectrum.size(); ++k) spectrum[k] *= scale_[k];
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(spectrum.data()), real.data());
    std::copy_n(real.begin(), steps_, increments.begin());
  }

 private:
  int steps_;
  int size_;
  std::vector<double> scale_;  // sqrt(lambda_k) / (2n), k = 0..n
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// nullptr when the embedding has a negative eigenvalue beyond tolerance.
std::shared_ptr<const Coloring> try_circulant(double hurst, int steps, double dt, double tolerance) {
  const int size = 2 * steps;
  const auto row = fgn_row(hurst, steps, dt);
  std::vector<double> first(size);
  for (int k = 0; k <= steps; ++k) first[k] = row[k];
  for (int k = steps + 1; k < size; ++k) first[k] = row[size - k];

  std::vector<std::complex<double>> spectrum(steps + 1);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_plan plan = fftw_plan_dft_r2c_1d(size, first.data(), reinterpret_cast<fftw_complex*>(spectrum.data()),
                                          FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  double largest = 0.0;
  double smallest = 0.0;
  for (const auto& c : spectrum) {
    largest = std::max(largest, c.real());
    smallest = std::min(smallest, c.real());
  }
  if (smallest < -tolerance * largest) return nullptr;

  std::vector<double> scale(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    scale[k] = std::sqrt(std::max(0.0, spectrum[k].real())) / size;
  }
  return std::make_shared<CirculantColoring>(std::move(scale), steps);
}

std::shared_ptr<const Coloring> build_coloring(double hurst, int steps, double dt, const GeneratorOptions& options) {
  auto dense = [&]() -> std::shared_ptr<const Coloring> {
    if (steps > options.dense_step_limit) {
      throw GeneratorError("dense Cholesky factor requested for n=" + std::to_string(steps) +
                           " above the configured limit " + std::to_string(options.dense_step_limit));
    }
    return std::make_shared<CholeskyColoring>(hurst, steps, dt);
  };

  Backend backend = options.backend;
  if (backend == Backend::automatic) {
    backend = (steps >= options.circulant_min_steps && is_power_of_two(steps)) ? Backend::circulant
                                                                               : Backend::cholesky;
  }
  if (backend == Backend::cholesky) return dense();

  if (!is_power_of_two(steps)) {
    throw std::invalid_argument("circulant embedding needs n to be a power of two, got " + std::to_string(steps));
  }
  if (auto circulant = try_circulant(hurst, steps, dt, options.negative_eigen_tolerance)) return circulant;
  return dense();
}

using CacheKey = std::tuple<double, int, double, int, int, int, double>;

}  // namespace

double fbm_covariance(double s, double t, double hurst) {
  require_hurst(hurst);
  if (s < 0.0 || t < 0.0) throw std::domain_error("fbm_covariance: times must be nonnegative");
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

double fgn_autocovariance(long long lag, double hurst, double dt) {
  require_hurst(hurst);
  if (!(dt > 0.0)) throw std::domain_error("fgn_autocovariance: dt must be positive");
  if (lag < 0) throw std::domain_error("fgn_autocovariance: lag must be nonnegative");
  const double h2 = 2.0 * hurst;
  const double scale = std::pow(dt, h2);
  if (lag == 0) return scale;
  const double k = static_cast<double>(lag);
  return 0.5 * scale * (std::pow(k + 1.0, h2) + std::pow(k - 1.0, h2) - 2.0 * std::pow(k, h2));
}

std::shared_ptr<const Coloring> coloring_for(double hurst, int steps, double dt, const GeneratorOptions& options) {
  require_hurst(hurst);
  if (steps < 1) throw std::domain_error("coloring_for: n must be >= 1");
  if (!(dt > 0.0)) throw std::domain_error("coloring_for: dt must be positive");

  static std::shared_mutex mutex;
  static std::map<CacheKey, std::shared_ptr<const Coloring>> cache;

  const CacheKey key{hurst, steps, dt, static_cast<int>(options.backend), options.circulant_min_steps,
                     options.dense_step_limit, options.negative_eigen_tolerance};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::unique_lock lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto coloring = build_coloring(hurst, steps, dt, options);
  cache.emplace(key, coloring);
  return coloring;
}

int noise_rows(const HurstModel& model, const TimeGrid& grid, const GeneratorOptions& options) {
  return coloring_for(model.hurst, grid.steps(), grid.dt(), options)->noise_rows();
}

NoiseVector draw_noise(const HurstModel& model, const TimeGrid& grid, Engine& engine,
                       const GeneratorOptions& options) {
  NoiseVector xi(noise_rows(model, grid, options), model.dim);
  fill_standard_normal(engine, xi.values());
  return xi;
}

Path noise_to_path(const NoiseVector& xi, const HurstModel& model, const TimeGrid& grid,
                   const GeneratorOptions& options) {
  const auto coloring = coloring_for(model.hurst, grid.steps(), grid.dt(), options);
  if (xi.dim() != model.dim || xi.rows() != coloring->noise_rows()) {
    throw std::invalid_argument("noise_to_path: noise shape (" + std::to_string(xi.rows()) + "," +
                                std::to_string(xi.dim()) + ") does not match (" +
                                std::to_string(coloring->noise_rows()) + "," + std::to_string(model.dim) + ")");
  }
  const int n = grid.steps();
  Path path(grid, model.dim);
  std::vector<double> column(static_cast<std::size_t>(xi.rows()));
  std::vector<double> increments(static_cast<std::size_t>(n));
  for (int i = 0; i < model.dim; ++i) {
    for (int k = 0; k < xi.rows(); ++k) column[k] = xi(k, i);
    coloring->apply(column, increments);
    double position = 0.0;
    for (int k = 0; k < n; ++k) {
      position += increments[k];
      path(k + 1, i) = position;
    }
  }
  return path;
}

Path sample_fbm(const HurstModel& model, const TimeGrid& grid, std::uint64_t seed, const GeneratorOptions& options) {
  Engine engine = make_engine(seed);
  return noise_to_path(draw_noise(model, grid, engine, options), model, grid, options);
}

}  // namespace srfbm
