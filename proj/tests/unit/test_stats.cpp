#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "srfbm/stats.hpp"

using namespace srfbm;

TEST_SUITE("stats") {
  TEST_CASE("pairwise_sum") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  }

  TEST_CASE("mean_and_error") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto s = mean_and_error(v);
    CHECK(s.mean == 2.5);
    CHECK(s.std_dev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK_THROWS(mean_and_error(std::vector<double>{1.0}));
  }

  TEST_CASE("log_mean_exp matches the direct mean and survives underflow") {
    const std::vector<double> x{-1.0, -2.0, 0.5, -0.25};
    double direct = 0.0;
    for (double v : x) direct += std::exp(v);
    direct /= 4.0;
    CHECK(log_mean_exp(x).log_mean == doctest::Approx(std::log(direct)));
    std::vector<double> shifted = x;
    for (double& v : shifted) v -= 2000.0;
    const auto l = log_mean_exp(shifted);
    CHECK(l.log_mean == doctest::Approx(std::log(direct) - 2000.0));
    CHECK(l.relative_std_error == doctest::Approx(log_mean_exp(x).relative_std_error));
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(log_mean_exp(std::vector<double>{ninf, ninf}).log_mean == ninf);
  }

  TEST_CASE("least_squares recovers an exact line") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{1.0, 3.0, 5.0, 7.0};
    const auto f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.slope_std_error == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("batch_means and median") {
    std::vector<double> v(64, 1.0);
    CHECK(batch_means(v, 8).mean == 1.0);
    CHECK(median(std::vector<double>{3.0, 1.0, 2.0}) == 2.0);
    CHECK(median(std::vector<double>{4.0, 1.0, 2.0, 3.0}) == 2.5);
  }
}
