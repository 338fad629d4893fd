#include "srfbm/rng.hpp"

namespace srfbm {

void fill_standard_normal(Engine& engine, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : out) x = normal(engine);
}

}  // namespace srfbm
