#pragma once

#include <cstddef>
#include <span>

namespace srfbm {

/// Recursive pairwise summation; the result depends only on the order of
/// `values`, never on how they were produced.
double pairwise_sum(std::span<const double> values);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(m)
  double std_dev = 0.0;
  std::size_t count = 0;
};

/// Requires at least two values.
MeanAndError mean_and_error(std::span<const double> values);

/// Mean of exp(x_i) computed in log space.
struct LogMeanExp {
  double log_mean = 0.0;       // log of the sample mean of exp(x)
  double log_std_error = 0.0;  // delta method: std_error / mean
  double relative_std_error = 0.0;
  double mean = 0.0;           // may underflow to zero
  double std_error = 0.0;
  std::size_t count = 0;
};

LogMeanExp log_mean_exp(std::span<const double> log_values);

/// Standard error of the mean of an autocorrelated series by non-overlapping
/// batch means (`batches` equal batches, remainder dropped from the front).
MeanAndError batch_means(std::span<const double> series, std::size_t batches = 32);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double intercept_std_error = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x; needs >= 3 points and two distinct x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

double median(std::span<const double> values);

}  // namespace srfbm
