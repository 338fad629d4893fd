#include "srfbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace srfbm {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanAndError mean_and_error(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 2) throw std::invalid_argument("mean_and_error: need at least two values");
  const double mean = pairwise_sum(values) / static_cast<double>(m);
  std::vector<double> sq(m);
  for (std::size_t i = 0; i < m; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(sq) / static_cast<double>(m - 1);
  const double sd = std::sqrt(var);
  return {mean, sd / std::sqrt(static_cast<double>(m)), sd, m};
}

LogMeanExp log_mean_exp(std::span<const double> log_values) {
  const std::size_t m = log_values.size();
  if (m < 2) throw std::invalid_argument("log_mean_exp: need at least two values");
  const double top = *std::max_element(log_values.begin(), log_values.end());
  LogMeanExp out;
  out.count = m;
  if (top == -std::numeric_limits<double>::infinity()) {
    out.log_mean = top;
    out.log_std_error = 0.0;
    return out;
  }
  std::vector<double> scaled(m);
  for (std::size_t i = 0; i < m; ++i) scaled[i] = std::exp(log_values[i] - top);
  const auto s = mean_and_error(scaled);
  out.log_mean = top + std::log(s.mean);
  out.relative_std_error = s.std_error / s.mean;
  out.log_std_error = out.relative_std_error;
  out.mean = std::exp(out.log_mean);
  out.std_error = out.mean * out.relative_std_error;
  return out;
}

MeanAndError batch_means(std::span<const double> series, std::size_t batches) {
  if (batches < 2) throw std::invalid_argument("batch_means: need at least two batches");
  const std::size_t size = series.size() / batches;
  if (size == 0) throw std::invalid_argument("batch_means: series shorter than batch count");
  const std::size_t offset = series.size() - size * batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    means[b] = pairwise_sum(series.subspan(offset + b * size, size)) / static_cast<double>(size);
  }
  auto out = mean_and_error(means);
  out.count = size * batches;
  return out;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m != y.size()) throw std::invalid_argument("least_squares: size mismatch");
  if (m < 3) throw std::invalid_argument("least_squares: need at least three points");
  const double mx = pairwise_sum(x) / static_cast<double>(m);
  const double my = pairwise_sum(y) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  const double sigma2 = rss / static_cast<double>(m - 2);
  fit.slope_std_error = std::sqrt(sigma2 / sxx);
  double sum_x2 = 0.0;
  for (double v : x) sum_x2 += v * v;
  fit.intercept_std_error = std::sqrt(sigma2 * sum_x2 / (static_cast<double>(m) * sxx));
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - rss / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace srfbm
