#pragma once

#include <vector>

#include "srfbm/fbm.hpp"

namespace srfbm {

struct Observables {
  double r_gyration = 0.0;
  double end_to_end_sq = 0.0;
  std::vector<double> path_mean;
};

/// Left-endpoint time average of the path over [0, T).
std::vector<double> path_mean(const Path& path);

/// Root mean square distance from the time average, left-endpoint sums.
double radius_of_gyration(const Path& path);

/// |X_T|^2.
double end_to_end_sq(const Path& path);

Observables observe(const Path& path);

}  // namespace srfbm
