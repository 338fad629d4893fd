#include "srfbm/model.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace srfbm {

void ModelParams::validate() const {
  if (dim < 1) throw std::domain_error("dimension d must be >= 1");
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::domain_error("Hurst index H must lie in (0,1)");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("beta must be nonnegative and finite");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::domain_error("horizon T must be positive");
  if (steps < 1) throw std::domain_error("step count n must be >= 1");
}

ModelParams ModelParams::with_step(int dim, double hurst, double beta, double horizon, double dt) {
  const auto grid = TimeGrid::with_step(horizon, dt);
  ModelParams m{dim, hurst, beta, horizon, grid.steps()};
  m.validate();
  return m;
}

std::string stable_digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string canonical(const ModelParams& model) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "d=" << model.dim << ";H=" << model.hurst << ";beta=" << model.beta << ";T=" << model.horizon
     << ";n=" << model.steps << ';';
  return os.str();
}

}  // namespace srfbm
