#include "srfbm/observables.hpp"

#include <cmath>

namespace srfbm {

std::vector<double> path_mean(const Path& path) {
  const int n = path.grid().steps();
  std::vector<double> mean(static_cast<std::size_t>(path.dim()), 0.0);
  for (int k = 0; k < n; ++k) {
    const auto x = path.point(k);
    for (int i = 0; i < path.dim(); ++i) mean[i] += x[i];
  }
  for (double& m : mean) m /= n;
  return mean;
}

double radius_of_gyration(const Path& path) {
  const int n = path.grid().steps();
  const auto mean = path_mean(path);
  double second = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto x = path.point(k);
    for (int i = 0; i < path.dim(); ++i) {
      const double c = x[i] - mean[i];
      second += c * c;
    }
  }
  // (1/T) * dt * sum = sum / n.
  return std::sqrt(second / n);
}

double end_to_end_sq(const Path& path) {
  const auto end = path.point(path.grid().steps());
  double s = 0.0;
  for (double x : end) s += x * x;
  return s;
}

Observables observe(const Path& path) {
  return {radius_of_gyration(path), end_to_end_sq(path), path_mean(path)};
}

}  // namespace srfbm
