#pragma once

#include <span>

#include "srfbm/fbm.hpp"

namespace srfbm {

/// Discretized self-intersection energy, the integral of L_T(z)^2 over R^d.
struct EnergyValue {
  double value = 0.0;
};

/// Volume of the unit ball in R^d, pi^{d/2} / Gamma(1 + d/2).
double unit_ball_volume(int dim);

/// Volume of the intersection of two unit balls in R^d whose centers are r
/// apart. Exactly zero for r >= 2.
double ball_overlap(int dim, double r);

/// Left-endpoint occupation time of the open ball of `radius` around y:
/// dt * #{k < n : |X_k - y| < radius}.
double occupation_time(const Path& path, std::span<const double> y, double radius = 1.0);

/// dt^2 * sum_{i,j < n} ball_overlap(d, |X_i - X_j|), diagonal included.
EnergyValue energy_naive(const Path& path);

/// Same sum as energy_naive, enumerating only pairs in the same or adjacent
/// cells of a side-2 grid.
EnergyValue energy_fast(const Path& path);

}  // namespace srfbm
