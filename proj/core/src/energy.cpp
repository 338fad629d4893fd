#include "srfbm/energy.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace srfbm {

namespace {

constexpr double kSupport = 2.0;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// Overlap as a function of squared distance; avoids a sqrt for pairs out of
// range, which is most of them in the cell sweep.
class OverlapKernel {
 public:
  explicit OverlapKernel(int dim) : dim_(dim), full_(unit_ball_volume(dim)) {}

  double full() const noexcept { return full_; }

  double operator()(double r2) const {
    if (r2 >= kSupport * kSupport) return 0.0;
    return ball_overlap(dim_, std::sqrt(r2));
  }

 private:
  int dim_;
  double full_;
};

}  // namespace

double unit_ball_volume(int dim) {
  if (dim < 1) throw std::domain_error("unit_ball_volume: dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(1.0 + 0.5 * dim);
}

double ball_overlap(int dim, double r) {
  if (dim < 1) throw std::domain_error("ball_overlap: dimension must be >= 1");
  if (!(r >= 0.0)) throw std::domain_error("ball_overlap: distance must be nonnegative");
  if (r >= kSupport) return 0.0;
  switch (dim) {
    case 1:
      return 2.0 - r;
    case 2: {
      const double h = 0.5 * r;
      return 2.0 * std::acos(h) - h * std::sqrt(4.0 - r * r);
    }
    case 3:
      return std::numbers::pi / 12.0 * (4.0 + r) * (2.0 - r) * (2.0 - r);
    default: {
      // Two caps of height 1 - r/2; each is K_d/2 * I_{1-(r/2)^2}((d+1)/2, 1/2).
      const double x = 1.0 - 0.25 * r * r;
      return unit_ball_volume(dim) * boost::math::ibeta(0.5 * (dim + 1), 0.5, x);
    }
  }
}

double occupation_time(const Path& path, std::span<const double> y, double radius) {
  if (static_cast<int>(y.size()) != path.dim()) {
    throw std::invalid_argument("occupation_time: point dimension does not match path");
  }
  if (!(radius > 0.0)) throw std::domain_error("occupation_time: radius must be positive");
  const double r2 = radius * radius;
  long long hits = 0;
  for (int k = 0; k < path.grid().steps(); ++k) {
    if (squared_distance(path.point(k), y) < r2) ++hits;
  }
  return path.grid().dt() * static_cast<double>(hits);
}

EnergyValue energy_naive(const Path& path) {
  const int n = path.grid().steps();
  const OverlapKernel kernel(path.dim());
  double off_diagonal = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto xi = path.point(i);
    for (int j = i + 1; j < n; ++j) off_diagonal += kernel(squared_distance(xi, path.point(j)));
  }
  const double dt = path.grid().dt();
  return {dt * dt * (2.0 * off_diagonal + n * kernel.full())};
}

namespace {

constexpr int kMaxCellDim = 8;
using CellIndex = std::array<long long, kMaxCellDim>;

struct CellHash {
  std::size_t operator()(const CellIndex& c) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (long long v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

EnergyValue energy_fast(const Path& path) {
  const int dim = path.dim();
  if (dim > kMaxCellDim) return energy_naive(path);

  const int n = path.grid().steps();
  const OverlapKernel kernel(dim);

  std::unordered_map<CellIndex, std::vector<int>, CellHash> cells;
  cells.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    CellIndex c{};
    const auto x = path.point(k);
    for (int i = 0; i < dim; ++i) c[i] = static_cast<long long>(std::floor(x[i] / kSupport));
    cells[c].push_back(k);
  }

  // Offsets in {-1,0,1}^d, lexicographically positive half only, so every
  // unordered pair of distinct cells is visited once.
  std::vector<CellIndex> forward;
  int total = 1;
  for (int i = 0; i < dim; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    CellIndex off{};
    int rest = code;
    for (int i = 0; i < dim; ++i) {
      off[i] = rest % 3 - 1;
      rest /= 3;
    }
    int first_nonzero = 0;
    for (int i = 0; i < dim; ++i) {
      if (off[i] != 0) {
        first_nonzero = static_cast<int>(off[i]);
        break;
      }
    }
    if (first_nonzero > 0) forward.push_back(off);
  }

  double off_diagonal = 0.0;
  for (const auto& [cell, members] : cells) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      const auto xa = path.point(members[a]);
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        off_diagonal += kernel(squared_distance(xa, path.point(members[b])));
      }
    }
    for (const auto& off : forward) {
      CellIndex other = cell;
      for (int i = 0; i < dim; ++i) other[i] += off[i];
      const auto it = cells.find(other);
      if (it == cells.end()) continue;
      for (int a : members) {
        const auto xa = path.point(a);
        for (int b : it->second) off_diagonal += kernel(squared_distance(xa, path.point(b)));
      }
    }
  }

  const double dt = path.grid().dt();
  return {dt * dt * (2.0 * off_diagonal + n * kernel.full())};
}

}  // namespace srfbm
