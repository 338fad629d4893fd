#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "srfbm/observables.hpp"
#include "srfbm/rng.hpp"
#include "support.hpp"

using namespace srfbm;
using srfbm::test::constant_path;
using srfbm::test::make_path;

TEST_SUITE("observables") {
  TEST_CASE("constant path") {
    const Path p = constant_path(5.0, 50, 2);
    CHECK(radius_of_gyration(p) == 0.0);
    CHECK(end_to_end_sq(p) == 0.0);
    const auto o = observe(p);
    CHECK(o.path_mean == std::vector<double>{0.0, 0.0});
  }

  TEST_CASE("linear path") {
    const Path p = make_path(12.0, 1200, 1, [](int k) { return std::vector<double>{0.01 * k}; });
    CHECK(std::abs(radius_of_gyration(p) - 12.0 / (2.0 * std::sqrt(3.0))) <= 0.01);
    const Path q = make_path(5.0, 50, 1, [](int k) { return std::vector<double>{0.1 * k}; });
    CHECK(end_to_end_sq(q) == doctest::Approx(25.0).epsilon(1e-14));
  }

  TEST_CASE("left-endpoint mean of a linear path") {
    // (1/n) sum_{k<n} k dt = (n-1) dt / 2.
    const Path p = make_path(4.0, 8, 1, [](int k) { return std::vector<double>{0.5 * k}; });
    CHECK(path_mean(p)[0] == doctest::Approx(3.5 * 0.5));
  }

  TEST_CASE("translation and scaling") {
    const Path p = sample_fbm(HurstModel::make(0.4, 2), TimeGrid(8.0, 256), 4);
    Path shifted = p, scaled = p;
    for (int k = 0; k < p.points(); ++k) {
      for (int i = 0; i < 2; ++i) {
        shifted(k, i) += 1024.0;
        scaled(k, i) *= -2.5;
      }
    }
    CHECK(radius_of_gyration(shifted) == doctest::Approx(radius_of_gyration(p)).epsilon(1e-10));
    CHECK(std::abs(radius_of_gyration(scaled) / radius_of_gyration(p) - 2.5) <= 2.5e-12);
  }

  TEST_CASE("max |X_k| bounds R_T / 2") {
    for (int i = 0; i < 200; ++i) {
      const Path p = sample_fbm(HurstModel::make(0.3 + 0.002 * i, 1 + i % 3), TimeGrid(10.0, 128), mix64(8, i));
      double top = 0.0;
      for (int k = 0; k < p.grid().steps(); ++k) {
        double s = 0.0;
        for (double x : p.point(k)) s += x * x;
        top = std::max(top, std::sqrt(s));
      }
      CHECK(top >= 0.99 * radius_of_gyration(p) / 2.0);
    }
  }

  TEST_CASE("ensemble mean end-to-end distance at H = 0.6, T = 8") {
    const int d = 2;
    const std::size_t m = 10000;
    std::vector<double> e2e(m);
    for (std::size_t i = 0; i < m; ++i) e2e[i] = end_to_end_sq(sample_fbm(HurstModel::make(0.6, d), TimeGrid(8.0, 64), mix64(9, i)));
    double s = 0.0, s2 = 0.0;
    for (double v : e2e) {
      s += v;
      s2 += v * v;
    }
    const double mean = s / m;
    const double se = std::sqrt((s2 / m - mean * mean) / m);
    CHECK(std::abs(mean - d * std::pow(8.0, 1.2)) <= 4.0 * se);
  }
}
