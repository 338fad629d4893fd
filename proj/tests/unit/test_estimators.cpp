#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "srfbm/estimators.hpp"
#include "srfbm/girsanov.hpp"
#include "srfbm/observables.hpp"
#include "srfbm/rng.hpp"
#include "srfbm/stats.hpp"
#include "support.hpp"

using namespace srfbm;
using srfbm::test::constant_path;
using srfbm::test::make_path;

namespace {

bool within_bands(const EstimateWithError& a, const EstimateWithError& b, double k = 4.0) {
  return std::abs(a.value - b.value) <= k * std::hypot(a.std_error, b.std_error);
}

/// R_T^2 = z^T A z on noise space, assembled by polarization from
/// radius_of_gyration applied to the generator's columns.
Eigen::MatrixXd gyration_form(const ModelParams& model, const GeneratorOptions& gen) {
  const auto hm = model.hurst_model();
  const auto grid = model.grid();
  const int rows = noise_rows(hm, grid, gen);
  auto r2 = [&](const NoiseVector& xi) {
    const double r = radius_of_gyration(noise_to_path(xi, hm, grid, gen));
    return r * r;
  };
  auto unit = [&](int i, int j) {
    NoiseVector xi(rows, 1);
    xi(i, 0) += 1.0;
    if (j >= 0) xi(j, 0) += 1.0;
    return xi;
  };
  std::vector<double> diag(rows);
  for (int i = 0; i < rows; ++i) diag[i] = r2(unit(i, -1));
  Eigen::MatrixXd a(rows, rows);
  for (int i = 0; i < rows; ++i) {
    a(i, i) = diag[i];
    for (int j = 0; j < i; ++j) a(i, j) = a(j, i) = 0.5 * (r2(unit(i, j)) - diag[i] - diag[j]);
  }
  return a;
}

/// P(z^T A z >= r^2) for standard normal z, sampling the top eigen-coordinate
/// from an equal mixture of N(+mu, 1) and N(-mu, 1) with mu on the event boundary.
MeanAndError gaussian_tail_oracle(const Eigen::VectorXd& eig, double r, std::size_t m, std::uint64_t seed) {
  const int top = static_cast<int>(eig.size()) - 1;
  const double mu = r / std::sqrt(eig(top));
  Engine engine = make_engine(seed);
  std::vector<double> y(eig.size()), w(m);
  for (std::size_t s = 0; s < m; ++s) {
    fill_standard_normal(engine, y);
    double q = 0.0;
    for (int i = 0; i < top; ++i) q += eig(i) * y[i] * y[i];
    const double x = y[top] + (s % 2 == 0 ? mu : -mu);
    q += eig(top) * x * x;
    // phi(x) / mixture(x) = exp(mu^2 / 2) / cosh(mu x).
    const double a = std::abs(mu * x);
    const double log_w = 0.5 * mu * mu - a - std::log1p(std::exp(-2.0 * a)) + std::log(2.0);
    w[s] = q >= r * r ? std::exp(log_w) : 0.0;
  }
  return mean_and_error(w);
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("beta = 0 gives exactly one") {
    const auto model = ModelParams::with_step(2, 0.4, 0.0, 4.0, 0.25);
    const auto z = estimate_ZT_naive(model, 100, 3);
    CHECK(z.value == 1.0);
    CHECK(z.std_error == 0.0);
    CHECK(z.sample_size == 100);
    CHECK(z.method == EstimatorMethod::naive);
  }

  TEST_CASE("huge beta drives the naive estimate below 1e-3") {
    const auto model = ModelParams::with_step(1, 0.5, 1e6, 8.0, 0.25);
    const auto z = estimate_ZT_naive(model, 50, 1);
    CHECK(z.value < 1e-3);
    CHECK(z.log_value < -1e5);
  }

  TEST_CASE("lambda = 0 importance equals naive exactly") {
    const auto model = ModelParams::with_step(2, 0.6, 0.7, 4.0, 0.25);
    const auto a = estimate_ZT_naive(model, 500, 8);
    const auto b = estimate_ZT_importance(model, TiltSpec(0.0, 2), 500, 8);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.log_value == b.log_value);
    CHECK(b.method == EstimatorMethod::importance);
  }

  TEST_CASE("beta = 0 importance is mean one") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      const auto model = ModelParams::with_step(1, 0.3, 0.0, 4.0, 1.0 / 32.0);
      const auto z = estimate_ZT_importance(model, TiltSpec(lambda, 1), 20000, 12);
      CHECK(std::abs(z.value - 1.0) <= 4.0 * z.std_error);
    }
  }

  TEST_CASE("tilting reduces the error at T = 16") {
    const auto model = ModelParams::with_step(1, 0.5, 1.0, 16.0, 0.25);
    const std::size_t m = 20000;
    const auto a = estimate_ZT_naive(model, m, 303);
    const auto b = estimate_ZT_importance(model, TiltSpec(lambda_star(1, 0.5, 1.0, 16.0), 1), m, 303);
    MESSAGE("log Z naive " << a.log_value << " rel se " << a.relative_std_error << "; importance " << b.log_value
                           << " rel se " << b.relative_std_error);
    CHECK(b.relative_std_error < a.relative_std_error);
  }

  TEST_CASE("tail at infinite radius") {
    const auto model = ModelParams::with_step(1, 0.5, 1.0, 4.0, 0.125);
    const double inf = std::numeric_limits<double>::infinity();
    const auto z = estimate_ZT_naive(model, 1000, 4);
    const auto below = estimate_tail(model, inf, TailSide::below, 1000, 4);
    const auto above = estimate_tail(model, inf, TailSide::above, 1000, 4);
    CHECK(below.value == z.value);
    CHECK(below.std_error == z.std_error);
    CHECK(above.value == 0.0);
    CHECK_THROWS(estimate_tail(model, 0.0, TailSide::below, 10, 1));
  }

  TEST_CASE("below and above together cover Z") {
    for (double beta : {0.0, 0.3, 1.0}) {
      const auto model = ModelParams::with_step(2, 0.5, beta, 4.0, 0.125);
      const auto z = estimate_ZT_naive(model, 2000, 5);
      for (double r : {0.5, 0.8, 1.2}) {
        const auto lo = estimate_tail(model, r, TailSide::below, 2000, 5);
        const auto hi = estimate_tail(model, r, TailSide::above, 2000, 5);
        // Separate means of the two halves may round one ulp per addition
        // below the mean of the whole.
        CHECK(lo.value + hi.value >= z.value * (1.0 - 64.0 * std::numeric_limits<double>::epsilon()));
      }
    }
  }

  TEST_CASE("Z is nonincreasing in beta on common paths") {
    double prev = 2.0;
    for (double beta : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const auto z = estimate_ZT_naive(ModelParams::with_step(1, 0.7, beta, 4.0, 0.125), 1000, 6);
      CHECK(z.value <= prev);
      prev = z.value;
    }
  }

  TEST_CASE("estimates are independent of the worker count") {
    const auto model = ModelParams::with_step(1, 0.5, 1.0, 4.0, 0.125);
    const auto a = estimate_ZT_naive(model, 300, 9, {.workers = 1});
    const auto b = estimate_ZT_naive(model, 300, 9, {.workers = 3});
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
  }

  TEST_CASE("log-space aggregation survives underflow") {
    std::vector<double> logw{-2000.0, -2001.0, -2002.0};
    const auto e = estimate_from_log_weights(logw, EstimatorMethod::naive);
    double direct = (1.0 + std::exp(-1.0) + std::exp(-2.0)) / 3.0;
    CHECK(e.log_value == doctest::Approx(-2000.0 + std::log(direct)).epsilon(1e-14));
    CHECK(e.value == 0.0);
    const double ninf = -std::numeric_limits<double>::infinity();
    const auto none = estimate_from_log_weights(std::vector<double>{ninf, ninf}, EstimatorMethod::naive);
    CHECK(none.value == 0.0);
    CHECK(none.std_error == 0.0);
  }

  TEST_CASE("Gaussian upper tail shape at beta = 0") {
    GeneratorOptions gen;
    gen.backend = Backend::cholesky;
    for (double hurst : {0.5, 0.7}) {
      const double T = 4.0;
      const auto model = ModelParams::with_step(1, hurst, 0.0, T, 0.125);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gyration_form(model, gen));
      const Eigen::VectorXd eig = es.eigenvalues();
      CHECK(eig(0) > -1e-9);

      const double scale = std::pow(T, hurst);
      const auto at_one = gaussian_tail_oracle(eig, scale, 200000, 7);
      const auto naive = estimate_tail(model, scale, TailSide::above, 100000, 8, {.workers = 1, .generator = gen});
      MESSAGE("H=" << hurst << " oracle " << at_one.mean << " +- " << at_one.std_error << ", naive " << naive.value
                   << " +- " << naive.std_error);
      CHECK(std::abs(at_one.mean - naive.value) <= 4.0 * std::hypot(at_one.std_error, naive.std_error));

      std::vector<std::pair<double, double>> pts;
      for (double k : {1.0, 2.0, 3.0}) {
        const auto q = gaussian_tail_oracle(eig, k * scale, 200000, 7 + static_cast<std::uint64_t>(k));
        REQUIRE(q.mean > 0.0);
        CHECK(q.std_error < 0.05 * q.mean);
        pts.emplace_back(k * scale, -std::log(q.mean));
      }
      const auto fit = fit_power_law(pts);
      MESSAGE("H=" << hurst << " tail slope " << fit.exponent);
      CHECK(fit.exponent >= 1.7);
    }
  }

  TEST_CASE("fit_power_law on exact data") {
    std::vector<std::pair<double, double>> pts, flat;
    for (double t : {8.0, 16.0, 32.0, 64.0}) {
      pts.emplace_back(t, 5.0 * std::pow(t, 1.3));
      flat.emplace_back(t, 2.5);
    }
    const auto f = fit_power_law(pts);
    CHECK(f.exponent == doctest::Approx(1.3).epsilon(1e-10));
    CHECK(std::exp(f.log_prefactor) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(std::abs(fit_power_law(flat).exponent) < 1e-12);
  }

  TEST_CASE("fit_power_law on noisy data") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> eps(-0.05, 0.05);
    std::vector<std::pair<double, double>> pts;
    for (double t : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) pts.emplace_back(t, t * (1.0 + eps(gen)));
    const auto f = fit_power_law(pts);
    CHECK(f.exponent >= 0.93);
    CHECK(f.exponent <= 1.07);
    CHECK(f.r_squared > 0.99);
  }

  TEST_CASE("fit_power_law rejects bad input") {
    using V = std::vector<std::pair<double, double>>;
    CHECK_THROWS(fit_power_law(V{{1.0, 1.0}, {2.0, 2.0}}));
    CHECK_THROWS(fit_power_law(V{{1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}}));
    CHECK_THROWS(fit_power_law(V{{1.0, 1.0}, {2.0, 2.0}, {2.0, 3.0}}));
  }

  TEST_CASE("claim on a constant path") {
    const auto c = check_claim(constant_path(4.0, 64, 1));
    CHECK(c.energy == doctest::Approx(32.0).epsilon(1e-13));
    CHECK(c.bound == doctest::Approx(0.9 * 2.0 * 9.0 / 128.0 * 16.0).epsilon(1e-13));
    CHECK(c.margin == doctest::Approx(29.975).epsilon(1e-13));
    CHECK(c.holds);
  }

  TEST_CASE("claim on a spread-out path") {
    const Path p = make_path(12.8, 128, 1, [](int k) { return std::vector<double>{2.0 * k}; });
    const auto c = check_claim(p);
    CHECK(c.energy == doctest::Approx(2.56).epsilon(1e-13));
    const double rg = std::sqrt(4.0 * (128.0 * 128.0 - 1.0) / 12.0);
    CHECK(c.r_gyration == doctest::Approx(rg).epsilon(1e-12));
    CHECK(c.bound == doctest::Approx(0.9 * 2.0 * 9.0 / 128.0 * 12.8 * 12.8 / (rg + 1.0)).epsilon(1e-12));
    CHECK(c.bound < 0.2 * c.energy);
    CHECK(c.holds);
  }

  TEST_CASE("claim holds on random paths") {
    for (int d : {1, 2, 3}) {
      for (double h : {0.3, 0.5, 0.7}) {
        const auto model = HurstModel::make(h, d);
        int held = 0;
        for (std::uint64_t s = 0; s < 50; ++s) held += check_claim(sample_fbm(model, TimeGrid(16.0, 256), s)).holds;
        CHECK(held == 50);
      }
    }
  }
}

TEST_SUITE("estimator_crossval") {
  TEST_CASE("naive and importance agree at T = 4") {
    const auto model = ModelParams::with_step(1, 0.5, 1.0, 4.0, 4.0 / 128.0);
    const double ls = lambda_star(1, 0.5, 1.0, 4.0);
    const auto a = estimate_ZT_naive(model, 100000, 101);
    const auto b = estimate_ZT_importance(model, TiltSpec(ls, 1), 100000, 202);
    MESSAGE("naive " << a.value << " +- " << a.std_error << ", importance " << b.value << " +- " << b.std_error);
    CHECK(within_bands(a, b));
  }
}
