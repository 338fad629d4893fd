#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "srfbm/fbm.hpp"
#include "srfbm/rng.hpp"
#include "srfbm/stats.hpp"

using namespace srfbm;

namespace {

// Var of the sample covariance of a centered Gaussian pair, over m draws.
double cov_se(double css, double ctt, double cst, std::size_t m) {
  return std::sqrt((css * ctt + cst * cst) / static_cast<double>(m));
}

}  // namespace

TEST_SUITE("fbm_core") {
  TEST_CASE("fbm_covariance examples") {
    CHECK(fbm_covariance(1.0, 1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(1.0, 4.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(1.0, 2.0, 0.75) == doctest::Approx(0.5 * std::pow(2.0, 1.5)).epsilon(1e-14));
    CHECK(fbm_covariance(2.0, 3.0, 0.4) == fbm_covariance(3.0, 2.0, 0.4));
    CHECK(fbm_covariance(2.5, 2.5, 0.7) == doctest::Approx(std::pow(2.5, 1.4)).epsilon(1e-14));
    CHECK_THROWS_AS(fbm_covariance(-1.0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(fbm_covariance(1.0, 1.0, 1.0), std::domain_error);
  }

  TEST_CASE("fgn_autocovariance examples") {
    CHECK(fgn_autocovariance(0, 0.5, 1.0) == doctest::Approx(1.0));
    for (long long k = 1; k < 6; ++k) CHECK(fgn_autocovariance(k, 0.5, 0.37) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fgn_autocovariance(1, 0.75, 1.0) == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)).epsilon(1e-13));
    CHECK(fgn_autocovariance(0, 0.3, 0.25) == doctest::Approx(std::pow(0.25, 0.6)).epsilon(1e-14));
    // Finite difference of the fBm covariance.
    const double dt = 0.5, h = 0.35;
    for (int k = 0; k < 5; ++k) {
      const double t1 = (k + 1) * dt, t0 = k * dt;
      const double fd = fbm_covariance(t1, dt, h) - fbm_covariance(t0, dt, h) - fbm_covariance(t1, 0.0, h) +
                        fbm_covariance(t0, 0.0, h);
      CHECK(fgn_autocovariance(k, h, dt) == doctest::Approx(fd).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fgn_autocovariance(1, 0.5, 0.0), std::domain_error);
  }

  TEST_CASE("fGn Toeplitz matrix is positive semidefinite") {
    for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const int n = 128;
      const double dt = 0.25;
      Eigen::MatrixXd c(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = fgn_autocovariance(std::abs(i - j), h, dt);
      const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues().minCoeff();
      CHECK(smallest >= -1e-8 * std::pow(dt, 2 * h));
    }
  }

  TEST_CASE("TimeGrid invariants") {
    const TimeGrid g(3.0, 12);
    CHECK(g.dt() == 0.25);
    CHECK(g.time(0) == 0.0);
    CHECK(g.time(12) == 3.0);
    for (int k = 0; k < 12; ++k) CHECK(g.time(k) < g.time(k + 1));
    CHECK(TimeGrid::with_step(8.0, 0.25).steps() == 32);
    CHECK_THROWS(TimeGrid::with_step(1.0, 0.3));
    CHECK_THROWS(TimeGrid(0.0, 4));
    CHECK_THROWS(TimeGrid(1.0, 0));
  }

  TEST_CASE("zero noise gives the zero path") {
    for (Backend b : {Backend::cholesky, Backend::circulant}) {
      GeneratorOptions o;
      o.backend = b;
      const auto model = HurstModel::make(0.3, 2);
      const TimeGrid grid(4.0, 64);
      NoiseVector xi(noise_rows(model, grid, o), 2);
      const Path p = noise_to_path(xi, model, grid, o);
      for (double v : p.values()) CHECK(v == 0.0);
    }
  }

  TEST_CASE("Brownian reduction: dt = 1, H = 1/2 gives cumulative sums of the noise") {
    const auto model = HurstModel::make(0.5, 2);
    const TimeGrid grid(10.0, 10);
    GeneratorOptions o;
    o.backend = Backend::cholesky;
    NoiseVector xi(10, 2);
    Engine e = make_engine(3);
    fill_standard_normal(e, xi.values());
    const Path p = noise_to_path(xi, model, grid, o);
    for (int i = 0; i < 2; ++i) {
      double s = 0.0;
      for (int k = 0; k <= 10; ++k) {
        CHECK(p(k, i) == doctest::Approx(s).epsilon(1e-14));
        if (k < 10) s += xi(k, i);
      }
    }
  }

  TEST_CASE("noise_to_path is linear and rejects mis-shaped noise") {
    const auto model = HurstModel::make(0.7, 1);
    const TimeGrid grid(2.0, 32);
    NoiseVector a(32, 1), b(32, 1), c(32, 1);
    Engine e = make_engine(5);
    fill_standard_normal(e, a.values());
    fill_standard_normal(e, b.values());
    for (int k = 0; k < 32; ++k) c(k, 0) = 2.0 * a(k, 0) - 3.0 * b(k, 0);
    const Path pa = noise_to_path(a, model, grid), pb = noise_to_path(b, model, grid), pc = noise_to_path(c, model, grid);
    for (int k = 0; k <= 32; ++k) CHECK(pc(k, 0) == doctest::Approx(2.0 * pa(k, 0) - 3.0 * pb(k, 0)).epsilon(1e-12));
    CHECK_THROWS_AS(noise_to_path(NoiseVector(31, 1), model, grid), std::invalid_argument);
    CHECK_THROWS_AS(noise_to_path(NoiseVector(32, 2), model, grid), std::invalid_argument);
  }

  TEST_CASE("circulant backend needs a power of two") {
    GeneratorOptions o;
    o.backend = Backend::circulant;
    CHECK_THROWS_AS(coloring_for(0.4, 100, 0.1, o), std::invalid_argument);
    CHECK(coloring_for(0.4, 128, 0.1, o)->backend() == Backend::circulant);
    CHECK(coloring_for(0.4, 1024, 0.1)->backend() == Backend::circulant);
    CHECK(coloring_for(0.4, 256, 0.1)->backend() == Backend::cholesky);
    CHECK(coloring_for(0.4, 600, 0.1)->backend() == Backend::cholesky);
  }

  TEST_CASE("dense fallback limit is enforced") {
    GeneratorOptions o;
    o.backend = Backend::cholesky;
    o.dense_step_limit = 64;
    CHECK_THROWS_AS(coloring_for(0.4, 100, 0.1, o), GeneratorError);
  }

  TEST_CASE("sample_fbm is a deterministic function of the seed") {
    const auto model = HurstModel::make(0.3, 3);
    const TimeGrid grid(5.0, 64);
    const Path a = sample_fbm(model, grid, 11), b = sample_fbm(model, grid, 11), c = sample_fbm(model, grid, 12);
    CHECK(a.values().size() == b.values().size());
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
      same = same && a.values()[i] == b.values()[i];
      differs = differs || a.values()[i] != c.values()[i];
    }
    CHECK(same);
    CHECK(differs);
    for (int i = 0; i < 3; ++i) CHECK(a(0, i) == 0.0);
  }

  TEST_CASE("H = 1/2 endpoint mean is zero within the CLT band") {
    const auto model = HurstModel::make(0.5, 1);
    const int n = 64;
    const TimeGrid grid(n, n);
    const std::size_t m = 10000;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += sample_fbm(model, grid, mix64(21, i))(n, 0);
    CHECK(std::abs(s / m) <= 3.0 * std::sqrt(grid.horizon() / m));
  }

  TEST_CASE("H = 0.75, n = 256, dt = 1: Var(values[n]) = 256^1.5") {
    const auto model = HurstModel::make(0.75, 1);
    const TimeGrid grid(256.0, 256);
    const std::size_t m = 100000;
    std::vector<double> end(m);
    for (std::size_t i = 0; i < m; ++i) end[i] = sample_fbm(model, grid, mix64(22, i))(256, 0);
    double s2 = 0.0;
    for (double v : end) s2 += v * v;
    const double var = s2 / m;
    const double target = std::pow(256.0, 1.5);
    CHECK(std::abs(var - target) <= 3.0 * target * std::sqrt(2.0 / m));
  }

  TEST_CASE("stationary increments, self-similarity and coordinate independence") {
    for (Backend b : {Backend::cholesky, Backend::circulant}) {
      GeneratorOptions o;
      o.backend = b;
      for (double h : {0.3, 0.7}) {
        const auto model = HurstModel::make(h, 2);
        const int n = 64;
        const TimeGrid grid(8.0, n);
        const std::size_t m = 20000;
        const std::vector<std::pair<int, int>> pairs{{0, 8}, {8, 16}, {40, 48}, {10, 50}, {1, 64}};
        std::vector<double> inc_sq(pairs.size(), 0.0);
        double end_sq = 0.0, cross = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const Path p = sample_fbm(model, grid, mix64(23, i), o);
          for (std::size_t q = 0; q < pairs.size(); ++q) {
            const double d = p(pairs[q].second, 0) - p(pairs[q].first, 0);
            inc_sq[q] += d * d;
          }
          end_sq += p(n, 0) * p(n, 0);
          cross += p(n, 0) * p(n, 1);
        }
        for (std::size_t q = 0; q < pairs.size(); ++q) {
          const double lag = grid.time(pairs[q].second) - grid.time(pairs[q].first);
          const double target = std::pow(lag, 2 * h);
          CHECK(std::abs(inc_sq[q] / m - target) <= 4.0 * target * std::sqrt(2.0 / m));
        }
        const double tt = std::pow(8.0, 2 * h);
        CHECK(std::abs(end_sq / m / tt - 1.0) <= 4.0 * std::sqrt(2.0 / m));
        CHECK(std::abs(cross / m) <= 4.0 * cov_se(tt, tt, 0.0, m));
      }
    }
  }

  TEST_CASE("backends agree: empirical covariances within 4 standard errors on n = 64") {
    const int n = 64;
    const std::size_t m = 20000;
    const double h = 0.3;
    const auto model = HurstModel::make(h, 1);
    const TimeGrid grid(1.0, n);
    Eigen::MatrixXd sums[2] = {Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    int idx = 0;
    for (Backend b : {Backend::cholesky, Backend::circulant}) {
      GeneratorOptions o;
      o.backend = b;
      Eigen::VectorXd v(n);
      for (std::size_t i = 0; i < m; ++i) {
        const Path p = sample_fbm(model, grid, mix64(24 + idx, i), o);
        for (int k = 0; k < n; ++k) v(k) = p(k + 1, 0);
        sums[idx].noalias() += v * v.transpose();
      }
      ++idx;
    }
    double worst = 0.0;
    for (int s = 0; s < n; ++s) {
      for (int t = s; t < n; ++t) {
        const double ts = grid.time(s + 1), tt = grid.time(t + 1);
        const double se = std::sqrt(2.0) * cov_se(fbm_covariance(ts, ts, h), fbm_covariance(tt, tt, h),
                                                  fbm_covariance(ts, tt, h), m);
        worst = std::max(worst, std::abs(sums[0](s, t) - sums[1](s, t)) / m / se);
      }
    }
    CHECK(worst <= 4.0);
  }

  TEST_CASE("concurrent first use of one coloring is safe") {
    std::vector<std::jthread> threads;
    std::vector<const Coloring*> seen(4);
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([t, &seen] { seen[t] = coloring_for(0.61, 96, 0.125).get(); });
    }
    threads.clear();
    for (int t = 1; t < 4; ++t) CHECK(seen[t] == seen[0]);
  }
}
