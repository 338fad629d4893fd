#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "srfbm/fbm.hpp"

namespace srfbm::test {

/// Path of n steps on [0, T] whose k-th point is f(k).
template <class F>
Path make_path(double horizon, int steps, int dim, F f) {
  Path p(TimeGrid(horizon, steps), dim);
  for (int k = 0; k <= steps; ++k) {
    const std::vector<double> x = f(k);
    for (int i = 0; i < dim; ++i) p(k, i) = x[i];
  }
  return p;
}

inline Path constant_path(double horizon, int steps, int dim) {
  return make_path(horizon, steps, dim, [dim](int) { return std::vector<double>(dim, 0.0); });
}

/// Fresh scratch directory under SRFBM_SCRATCH or the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* base = std::getenv("SRFBM_SCRATCH");
  const auto root = base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "srfbm-tests";
  const auto dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace srfbm::test
