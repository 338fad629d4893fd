#include "srfbm/harness/checks.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "srfbm/energy.hpp"
#include "srfbm/estimators.hpp"
#include "srfbm/harness/sweep.hpp"
#include "srfbm/observables.hpp"
#include "srfbm/parallel.hpp"
#include "srfbm/rng.hpp"
#include "srfbm/sampler.hpp"
#include "srfbm/scaling.hpp"
#include "srfbm/stats.hpp"

namespace srfbm::harness {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckResult make(std::string name, bool passed, double measured, double tolerance, std::string detail) {
  return {std::move(name), passed, measured, tolerance, std::move(detail)};
}

// Volume of the unit ball, written out here so the oracle does not share
// code with the kernel under test.
double ball_volume(int m) { return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0); }

double overlap_closed_form(int dim, double r) {
  if (r >= 2.0) return 0.0;
  switch (dim) {
    case 1: return 2.0 - r;
    case 2: return 2.0 * std::acos(r / 2.0) - 0.5 * r * std::sqrt(4.0 - r * r);
    case 3: return std::numbers::pi * (4.0 + r) * (2.0 - r) * (2.0 - r) / 12.0;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

ModelParams model_of(int dim, double hurst, double beta, double horizon, int steps) {
  ModelParams m;
  m.dim = dim;
  m.hurst = hurst;
  m.beta = beta;
  m.horizon = horizon;
  m.steps = steps;
  return m;
}

struct TableCell {
  Rational hurst;
  int dim;
  Rational lower;
  Rational upper;
  int log_sign;  // -1 / +1 on lower / upper when the cell carries a log factor
};

// Exponents of T in R_T as tabulated (d = 1 cells list the common value).
const std::vector<TableCell>& exponent_table() {
  static const std::vector<TableCell> table = [] {
    using R = Rational;
    std::vector<TableCell> t;
    auto row = [&](R h, std::vector<std::pair<R, R>> cells, int log_dim) {
      for (int d = 1; d <= 6; ++d) {
        t.push_back({h, d, cells[d - 1].first, cells[d - 1].second, d == log_dim ? 1 : 0});
      }
    };
    row(R(1, 4), {{R(5, 6), R(5, 6)}, {R(7, 16), R(13, 16)}, {R(13, 42), R(11, 14)}, {R(1, 4), R(3, 4)},
                  {R(1, 5), R(3, 4)}, {R(1, 6), R(3, 4)}}, 4);
    row(R(1, 3), {{R(8, 9), R(8, 9)}, {R(7, 15), R(13, 15)}, {R(1, 3), R(5, 6)}, {R(1, 4), R(5, 6)},
                  {R(1, 5), R(5, 6)}, {R(1, 6), R(5, 6)}}, 3);
    row(R(1, 2), {{R(1), R(1)}, {R(1, 2), R(1)}, {R(1, 3), R(1)}, {R(1, 4), R(1)}, {R(1, 5), R(1)},
                  {R(1, 6), R(1)}}, 0);
    row(R(2, 3), {{R(10, 9), R(10, 9)}, {R(5, 9), R(10, 9)}, {R(10, 27), R(10, 9)}, {R(5, 18), R(10, 9)},
                  {R(2, 9), R(10, 9)}, {R(5, 27), R(10, 9)}}, 0);
    row(R(3, 4), {{R(7, 6), R(7, 6)}, {R(7, 12), R(7, 6)}, {R(7, 18), R(7, 6)}, {R(7, 24), R(7, 6)},
                  {R(7, 30), R(7, 6)}, {R(7, 36), R(7, 6)}}, 0);
    return t;
  }();
  return table;
}

std::string rat(const Rational& r) {
  return std::to_string(r.numerator()) + (r.denominator() == 1 ? "" : "/" + std::to_string(r.denominator()));
}

int sign_of(const Rational& r) { return r > Rational(0) ? 1 : (r < Rational(0) ? -1 : 0); }

}  // namespace

std::string format(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  measured=" << num(r.measured)
     << " tolerance=" << num(r.tolerance);
  if (!r.detail.empty()) os << "  (" << r.detail << ')';
  return os.str();
}

CheckResult check_exact_formulas() {
  std::vector<std::string> failures;
  double worst = 0.0;
  auto expect = [&](const std::string& what, double got, double want, double tol) {
    const double err = std::abs(got - want);
    worst = std::max(worst, err);
    if (!(err <= tol)) failures.push_back(what + " = " + num(got) + " vs " + num(want));
  };
  const auto g = girsanov_constants(0.5);
  if (g.c1 != 1.0 || g.quadratic_variation != 1.0) failures.push_back("girsanov_constants(0.5) != (1, 1) exactly");
  const auto l1 = lemma_constants(1);
  expect("C_lt(1)", l1.c_lower_tail, 9.0 / 128.0, 1e-12);
  expect("K_1", l1.unit_ball_volume, 2.0, 1e-12);
  const auto l2 = lemma_constants(2);
  expect("C_lt(2)", l2.c_lower_tail, 9.0 / (128.0 * std::numbers::pi), 1e-12);
  expect("K_2", l2.unit_ball_volume, std::numbers::pi, 1e-12);
  expect("K_3", lemma_constants(3).unit_ball_volume, 4.0 * std::numbers::pi / 3.0, 1e-12);
  expect("beta_power(1/4)", beta_power(0.25, 0.5, 2.0 / 3.0), 0.5, 1e-12);
  expect("beta_power(1)", beta_power(1.0, 0.5, 2.0 / 3.0), 1.0, 1e-12);
  expect("beta_power(8)", beta_power(8.0, 0.5, 2.0 / 3.0), 4.0, 1e-12);
  expect("rate_I2_star(1/2, 1, 10)", rate_I2_star(0.5, 1.0, 10.0), 5.0, 1e-12);
  expect("rate_I2_star(H, 0, T)", rate_I2_star(0.3, 0.0, 7.0), 0.0, 0.0);
  std::string detail = failures.empty() ? "max abs error over constants" : failures.front();
  return make("exact-formulas", failures.empty(), worst, 1e-12, detail);
}

CheckResult check_exponent_table() {
  int mismatches = 0;
  std::string first;
  for (const auto& cell : exponent_table()) {
    const auto b = bound_exponents(cell.dim, cell.hurst);
    const bool lower_ok = b.lower.power == cell.lower && sign_of(b.lower.log_power) == -cell.log_sign;
    const bool upper_ok = b.upper.power == cell.upper && sign_of(b.upper.log_power) == cell.log_sign;
    if (!(lower_ok && upper_ok)) {
      if (mismatches++ == 0) {
        first = "(H=" + rat(cell.hurst) + ", d=" + std::to_string(cell.dim) + ") got [" + rat(b.lower.power) + ", " +
                rat(b.upper.power) + "] want [" + rat(cell.lower) + ", " + rat(cell.upper) + "]";
      }
    }
  }
  const std::size_t cells = exponent_table().size();
  return make("exponent-table-audit", mismatches == 0, mismatches, 0,
              mismatches == 0 ? "mismatching cells out of " + std::to_string(cells) : first);
}

double overlap_monte_carlo(int dim, double r, std::size_t points, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (dim == 1) {
    double hits = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      const double x = -1.0 + 2.0 * (static_cast<double>(i) + u(engine)) / static_cast<double>(points);
      if (std::abs(x - r) < 1.0) hits += 1.0;
    }
    return 2.0 * hits / static_cast<double>(points);
  }
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(points))));
  const double hx = 2.0 / static_cast<double>(side);
  const double hr = 1.0 / static_cast<double>(side);
  const double shell = (dim - 1) * ball_volume(dim - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < side; ++i) {
    double column = 0.0;
    for (std::size_t j = 0; j < side; ++j) {
      const double x = -1.0 + hx * (static_cast<double>(i) + u(engine));
      const double rho = hr * (static_cast<double>(j) + u(engine));
      const double rho2 = rho * rho;
      if (x * x + rho2 < 1.0 && (x - r) * (x - r) + rho2 < 1.0) column += std::pow(rho, dim - 2);
    }
    total += column;
  }
  return shell * total * hx * hr;
}

std::vector<CheckResult> check_overlap(std::size_t mc_points, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::vector<double> radii{0.0, 0.3, 0.7, 1.0, 1.4, 1.9};

  double worst_closed = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (double r : radii) worst_closed = std::max(worst_closed, std::abs(ball_overlap(d, r) - overlap_closed_form(d, r)));
  }
  out.push_back(make("overlap-closed-forms-d1-3", worst_closed <= 1e-10, worst_closed, 1e-10, "max abs error"));

  double worst_mc = 0.0;
  std::string where;
  for (int d = 2; d <= 6; ++d) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const double oracle = overlap_monte_carlo(d, radii[k], mc_points, mix64(seed, d, k));
      const double err = std::abs(ball_overlap(d, radii[k]) - oracle);
      if (err > worst_mc) {
        worst_mc = err;
        where = "d=" + std::to_string(d) + ", r=" + num(radii[k]);
      }
    }
  }
  out.push_back(make("overlap-monte-carlo-d2-6", worst_mc <= 1e-3, worst_mc, 1e-3, "max abs error at " + where));

  bool zero = true;
  for (int d = 1; d <= 8; ++d) {
    for (double r : {2.0, 2.0 + 1e-12, 2.5, 10.0}) zero = zero && ball_overlap(d, r) == 0.0;
  }
  out.push_back(make("overlap-zero-beyond-2", zero, zero ? 0.0 : 1.0, 0.0, "exact zero for r >= 2, d = 1..8"));
  return out;
}

CheckResult check_generator_covariance(double hurst, int steps, std::size_t paths, Backend backend,
                                       std::uint64_t seed, int workers) {
  GeneratorOptions options;
  options.backend = backend;
  const auto model = HurstModel::make(hurst, 1);
  const TimeGrid grid(1.0, steps);
  const std::size_t chunks = std::min<std::size_t>(paths, 64);
  std::vector<Eigen::MatrixXd> partial(chunks, Eigen::MatrixXd::Zero(steps, steps));
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = paths * c / chunks;
    const std::size_t end = paths * (c + 1) / chunks;
    Eigen::MatrixXd block(static_cast<Eigen::Index>(end - begin), steps);
    for (std::size_t i = begin; i < end; ++i) {
      const Path p = sample_fbm(model, grid, mix64(seed, i), options);
      for (int k = 1; k <= steps; ++k) block(static_cast<Eigen::Index>(i - begin), k - 1) = p(k, 0);
    }
    partial[c].noalias() += block.transpose() * block;
  });
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(steps, steps);
  for (const auto& p : partial) sum += p;
  const double m = static_cast<double>(paths);

  double worst = 0.0;
  int at_s = 0, at_t = 0;
  for (int s = 1; s <= steps; ++s) {
    for (int t = s; t <= steps; ++t) {
      const double ts = grid.time(s), tt = grid.time(t);
      const double c = fbm_covariance(ts, tt, hurst);
      // Var(X_s X_t) for a centered Gaussian pair.
      const double se = std::sqrt((fbm_covariance(ts, ts, hurst) * fbm_covariance(tt, tt, hurst) + c * c) / m);
      const double z = std::abs(sum(s - 1, t - 1) / m - c) / se;
      if (z > worst) {
        worst = z;
        at_s = s;
        at_t = t;
      }
    }
  }
  const Backend used = coloring_for(hurst, steps, grid.dt(), options)->backend();
  return make("generator-covariance H=" + num(hurst) + " " + to_string(used), worst <= 4.0, worst, 4.0,
              "max |z| over entries, at (" + std::to_string(at_s) + ", " + std::to_string(at_t) + "), " +
                  std::to_string(paths) + " paths");
}

CheckResult check_coloring_exact(double hurst, int steps, Backend backend) {
  GeneratorOptions options;
  options.backend = backend;
  const double dt = 1.0 / steps;
  const auto coloring = coloring_for(hurst, steps, dt, options);
  const int rows = coloring->noise_rows();
  Eigen::MatrixXd a(steps, rows);
  std::vector<double> z(static_cast<std::size_t>(rows), 0.0), col(static_cast<std::size_t>(steps));
  for (int j = 0; j < rows; ++j) {
    z[j] = 1.0;
    coloring->apply(z, col);
    z[j] = 0.0;
    for (int k = 0; k < steps; ++k) a(k, j) = col[k];
  }
  const Eigen::MatrixXd cov = a * a.transpose();
  const double scale = fgn_autocovariance(0, hurst, dt);
  double worst = 0.0;
  for (int i = 0; i < steps; ++i) {
    for (int k = 0; k < steps; ++k) {
      worst = std::max(worst, std::abs(cov(i, k) - fgn_autocovariance(std::abs(i - k), hurst, dt)) / scale);
    }
  }
  return make("coloring-exact H=" + num(hurst) + " " + to_string(coloring->backend()), worst <= 1e-9, worst, 1e-9,
              "max relative error of L L^T against the fGn Toeplitz matrix");
}

std::vector<CheckResult> check_girsanov_tilt(double hurst, double lambda, double horizon, int steps, std::size_t paths,
                                             std::uint64_t seed, int workers, const LogWeightFn& log_weight) {
  const auto model = HurstModel::make(hurst, 1);
  const TimeGrid grid(horizon, steps);
  const TiltSpec tilt(lambda, 1);
  const auto weights = martingale_weights(grid, steps, hurst);
  std::vector<double> under_p(paths), under_tilt(paths), log_q(paths);
  parallel_for(paths, workers, [&](std::size_t i) {
    const Path path = sample_fbm(model, grid, mix64(seed, i));
    const double mp = martingale_M(path, tilt.direction(), weights);
    const Path drifted = add_drift(path, tilt);
    const double md = martingale_M(drifted, tilt.direction(), weights);
    under_p[i] = std::exp(log_weight(tilt, mp, horizon, hurst));
    log_q[i] = log_weight(tilt, md, horizon, hurst);
    under_tilt[i] = std::exp(-log_q[i]);
  });
  const std::string tag = " H=" + num(hurst) + " lambda=" + num(lambda);
  std::vector<CheckResult> out;
  const auto a = mean_and_error(under_p);
  const double za = std::abs(a.mean - 1.0) / a.std_error;
  out.push_back(make("rn-weight-mean-one" + tag, za <= 4.0, za, 4.0, "|mean - 1| / se, mean = " + num(a.mean)));
  const auto b = mean_and_error(under_tilt);
  const double zb = std::abs(b.mean - 1.0) / b.std_error;
  out.push_back(make("inverse-rn-weight-mean-one" + tag, zb <= 4.0, zb, 4.0,
                     "|mean - 1| / se under the drifted law, mean = " + num(b.mean)));
  const auto c = mean_and_error(log_q);
  const double target = 0.5 * lambda * lambda * girsanov_constants(hurst).quadratic_variation *
                        std::pow(horizon, 2.0 - 2.0 * hurst);
  const double zc = std::abs(c.mean - target) / c.std_error;
  out.push_back(make("i2-identity" + tag, zc <= 4.0, zc, 4.0,
                     "|mean log Q - lambda^2 C_H T^(2-2H)/2| / se, mean = " + num(c.mean) + " target = " + num(target)));
  return out;
}

CheckResult check_martingale_variance(double hurst, double horizon, int steps, std::size_t paths,
                                      double relative_tolerance, std::uint64_t seed, int workers) {
  const auto model = HurstModel::make(hurst, 1);
  const TimeGrid grid(horizon, steps);
  const auto weights = martingale_weights(grid, steps, hurst);
  const std::vector<double> u{1.0};
  std::vector<double> m(paths);
  parallel_for(paths, workers, [&](std::size_t i) {
    m[i] = martingale_M(sample_fbm(model, grid, mix64(seed, i)), u, weights);
  });
  const auto s = mean_and_error(m);
  const double target = girsanov_constants(hurst).quadratic_variation * std::pow(horizon, 2.0 - 2.0 * hurst);
  const double rel = std::abs(s.std_dev * s.std_dev / target - 1.0);
  return make("martingale-variance H=" + num(hurst), rel <= relative_tolerance, rel, relative_tolerance,
              "|Var(M_T) / (C_H T^(2-2H)) - 1|, n = " + std::to_string(steps));
}

CheckResult check_beta_zero_chain(int samples, std::size_t iid_paths, std::uint64_t seed, int workers) {
  ChainConfig chain;
  chain.model = model_of(1, 0.5, 0.0, 4.0, 32);
  chain.burn_in = 500;
  chain.thin = 1;
  chain.total_samples = samples;
  chain.seed = mix64(seed, 0);
  const auto run = run_chain(chain);
  std::vector<double> rg;
  for (const auto& r : run.records) rg.push_back(r.r_gyration);
  const auto chain_mean = batch_means(rg);

  EstimatorOptions eo;
  eo.workers = workers;
  const auto iid = summarize_paths(chain.model, iid_paths, mix64(seed, 1), eo);
  std::vector<double> iid_rg;
  for (const auto& p : iid) iid_rg.push_back(p.r_gyration);
  const auto ref = mean_and_error(iid_rg);
  const double z = std::abs(chain_mean.mean - ref.mean) /
                   std::sqrt(chain_mean.std_error * chain_mean.std_error + ref.std_error * ref.std_error);
  const bool all_accepted = run.acceptance_rate == 1.0;
  return make("beta-zero-chain", all_accepted && z <= 4.0, z, 4.0,
              "|chain mean R_T - iid mean| / se, acceptance = " + num(run.acceptance_rate));
}

CheckResult check_claim_sweep(const std::vector<int>& dims, const std::vector<double>& hursts, double horizon,
                              int steps, std::size_t paths, double slack, std::uint64_t seed, int workers) {
  std::size_t failures = 0, total = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::string first;
  std::size_t combo = 0;
  for (int d : dims) {
    for (double h : hursts) {
      const auto model = HurstModel::make(h, d);
      const TimeGrid grid(horizon, steps);
      std::vector<ClaimCheck> results(paths);
      parallel_for(paths, workers, [&](std::size_t i) {
        results[i] = check_claim(sample_fbm(model, grid, mix64(seed, combo, i)), slack);
      });
      for (const auto& c : results) {
        ++total;
        min_ratio = std::min(min_ratio, c.energy / c.bound);
        if (!c.holds && failures++ == 0) first = "d=" + std::to_string(d) + ", H=" + num(h) + " margin " + num(c.margin);
      }
      ++combo;
    }
  }
  return make("pathwise-claim slack=" + num(slack) + " n=" + std::to_string(steps), failures == 0,
              static_cast<double>(failures), 0.0,
              failures == 0 ? "failures out of " + std::to_string(total) + ", min energy/bound = " + num(min_ratio)
                            : first);
}

std::vector<CheckResult> check_lower_tail(double hurst, double beta, double horizon, int steps, std::size_t paths,
                                          const std::vector<double>& radii, std::uint64_t seed, int workers) {
  const auto model = model_of(1, hurst, beta, horizon, steps);
  EstimatorOptions eo;
  eo.workers = workers;
  const auto summaries = summarize_paths(model, paths, seed, eo);
  std::vector<CheckResult> out;
  for (double r : radii) {
    std::vector<double> lw(paths);
    for (std::size_t i = 0; i < paths; ++i) {
      lw[i] = summaries[i].r_gyration <= r ? -beta * summaries[i].energy : -std::numeric_limits<double>::infinity();
    }
    const auto est = estimate_from_log_weights(lw, EstimatorMethod::naive);
    const double bound = -(9.0 / 128.0) * beta * horizon * horizon / r;
    const double excess = est.log_value - bound;  // must not exceed 4 log-scale standard errors
    const bool empty = est.log_value == -std::numeric_limits<double>::infinity();
    const double allowance = 4.0 * est.log_std_error;
    out.push_back(make("lower-tail r=" + num(r), empty || excess <= allowance, empty ? -1.0 : excess, allowance,
                       empty ? "no path with R_T <= r; log q = -inf"
                             : "log q - bound, log q = " + num(est.log_value) + " bound = " + num(bound)));
  }
  return out;
}

CheckResult check_partition_growth(double hurst, double beta, const std::vector<double>& horizons, double dt,
                                   std::size_t paths, double lo, double hi, std::uint64_t seed, int workers) {
  EstimatorOptions eo;
  eo.workers = workers;
  std::vector<std::pair<double, double>> points;
  std::string detail;
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    const double T = horizons[k];
    const auto model = ModelParams::with_step(1, hurst, beta, T, dt);
    const double lambda = lambda_star(1, hurst, beta, T);
    const auto est = estimate_ZT_importance(model, TiltSpec(lambda, 1), paths, mix64(seed, k), eo);
    points.emplace_back(T, -est.log_value);
    detail += "T=" + num(T) + ": log Z=" + num(est.log_value) + " (rel se " + num(est.relative_std_error) + "); ";
  }
  const auto fit = fit_power_law(points);
  return make("partition-growth-slope", fit.exponent >= lo && fit.exponent <= hi, fit.exponent, hi,
              detail + "slope must lie in [" + num(lo) + ", " + num(hi) + "]");
}

CheckResult check_chain_exponent(double hurst, double beta, const std::vector<double>& horizons, double dt,
                                 int chains, int samples, double lo, double hi, std::uint64_t seed, int workers,
                                 const std::filesystem::path& scratch) {
  SweepConfig config;
  config.mode = Mode::mcmc;
  config.dims = {1};
  config.hursts = {hurst};
  config.betas = {beta};
  config.horizons = horizons;
  config.dt = dt;
  config.replicas = chains;
  config.samples = samples;
  config.master_seed = seed;
  config.output = (scratch / ("chain-exponent-H" + num(hurst))).string();
  SweepOptions so;
  so.workers = workers;
  const auto result = run_sweep(config, so);
  if (result.exit_code != 0) {
    return make("chain-exponent H=" + num(hurst), false, std::nan(""), hi,
                result.failures.empty() ? "sweep failed" : result.failures.front());
  }
  std::vector<std::pair<double, double>> points;
  std::string detail;
  for (const auto& row : result.summary) {
    points.emplace_back(row.point.model.horizon, row.median_rg);
    detail += "T=" + num(row.point.model.horizon) + ": median R=" + num(row.median_rg) + " acc=" +
              num(row.acceptance_rate.value_or(0.0)) + "; ";
  }
  const auto fit = fit_power_law(points);
  return make("chain-exponent H=" + num(hurst), fit.exponent >= lo && fit.exponent <= hi, fit.exponent, hi,
              detail + "nu must lie in [" + num(lo) + ", " + num(hi) + "], se " + num(fit.exponent_std_error));
}

CheckResult check_sampler_oracle(double horizon, int steps, int chains, int samples_per_chain,
                                 std::size_t iid_paths, std::uint64_t seed, int workers) {
  const auto model = model_of(1, 0.5, 1.0, horizon, steps);
  std::vector<MeanAndError> per_chain(static_cast<std::size_t>(chains));
  std::vector<double> acceptance(static_cast<std::size_t>(chains));
  parallel_for(per_chain.size(), workers, [&](std::size_t c) {
    ChainConfig chain;
    chain.model = model;
    chain.thin = 1;
    chain.total_samples = samples_per_chain;
    chain.seed = mix64(seed, c);
    const auto run = run_chain(chain);
    std::vector<double> rg;
    rg.reserve(run.records.size());
    for (const auto& r : run.records) rg.push_back(r.r_gyration);
    per_chain[c] = batch_means(rg);
    acceptance[c] = run.acceptance_rate;
  });
  double chain_mean = 0.0, chain_var = 0.0;
  for (const auto& s : per_chain) {
    chain_mean += s.mean;
    chain_var += s.std_error * s.std_error;
  }
  chain_mean /= chains;
  const double chain_se = std::sqrt(chain_var) / chains;

  EstimatorOptions eo;
  eo.workers = workers;
  const auto iid = summarize_paths(model, iid_paths, mix64(seed, 1u << 20), eo);
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : iid) top = std::max(top, -model.beta * p.energy);
  std::vector<double> w(iid.size()), wr(iid.size());
  for (std::size_t i = 0; i < iid.size(); ++i) {
    w[i] = std::exp(-model.beta * iid[i].energy - top);
    wr[i] = w[i] * iid[i].r_gyration;
  }
  const double sw = pairwise_sum(w);
  const double ratio = pairwise_sum(wr) / sw;
  std::vector<double> dev(iid.size());
  for (std::size_t i = 0; i < iid.size(); ++i) dev[i] = std::pow(w[i] * (iid[i].r_gyration - ratio), 2);
  const double ratio_se = std::sqrt(pairwise_sum(dev)) / sw;

  const double z = std::abs(chain_mean - ratio) / std::sqrt(chain_se * chain_se + ratio_se * ratio_se);
  return make("sampler-oracle", z <= 4.0, z, 4.0,
              "|chain mean R_T - reweighted iid mean| / se, chain " + num(chain_mean) + " +- " + num(chain_se) +
                  ", reweighted " + num(ratio) + " +- " + num(ratio_se) + ", acceptance " + num(acceptance.front()));
}

CheckResult check_determinism(int workers, const std::filesystem::path& scratch) {
  SweepConfig config;
  config.mode = Mode::mcmc;
  config.dims = {1, 2};
  config.hursts = {0.3, 0.5};
  config.betas = {1.0};
  config.horizons = {4.0, 8.0};
  config.dt = 0.25;
  config.replicas = 2;
  config.samples = 16;
  config.burn_in = 100;
  config.master_seed = 77;
  SweepOptions so;
  so.workers = workers;

  std::size_t mismatches = 0, lines = 0;
  std::string detail;
  auto compare_runs = [&](SweepConfig c, const std::string& tag) {
    c.output = (scratch / (tag + "-a")).string();
    const auto a = run_sweep(c, so);
    c.output = (scratch / (tag + "-b")).string();
    const auto b = run_sweep(c, so);
    if (a.exit_code != 0 || b.exit_code != 0) {
      ++mismatches;
      detail += tag + " sweep failed; ";
      return std::vector<std::string>{};
    }
    const auto la = read_data_lines(a.records_file);
    const auto lb = read_data_lines(b.records_file);
    lines += la.size();
    if (la.size() != lb.size()) ++mismatches;
    for (std::size_t i = 0; i < std::min(la.size(), lb.size()); ++i) mismatches += la[i] != lb[i];
    return la;
  };

  const auto chain_lines = compare_runs(config, "determinism-mcmc");
  SweepConfig naive = config;
  naive.mode = Mode::naive;
  naive.mc_samples = 64;
  compare_runs(naive, "determinism-naive");

  // Re-run one replica in isolation from its recorded seed.
  if (!chain_lines.empty()) {
    const auto rec = nlohmann::json::parse(chain_lines[chain_lines.size() / 2]);
    ChainConfig chain;
    chain.model = model_of(rec["d"].get<int>(), rec["H"].get<double>(), rec["beta"].get<double>(),
                           rec["T"].get<double>(), rec["n"].get<int>());
    chain.pcn_step = config.pcn_step;
    chain.burn_in = config.burn_in;
    chain.thin = config.thin;
    chain.total_samples = config.samples;
    chain.seed = rec["seed"].get<std::uint64_t>();
    chain.adapt_target = config.adapt_target;
    const auto run = run_chain(chain);
    const auto& again = run.records.at(rec["sample_index"].get<std::size_t>());
    if (again.r_gyration != rec["r_gyration"].get<double>() || again.energy != rec["energy"].get<double>()) {
      ++mismatches;
      detail += "isolated replica re-run differs; ";
    }
  }
  return make("determinism", mismatches == 0, static_cast<double>(mismatches), 0.0,
              detail + "mismatching data lines out of " + std::to_string(lines));
}

}  // namespace srfbm::harness
