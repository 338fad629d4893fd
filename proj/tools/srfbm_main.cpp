// Command line front end: sweep, verify, predict, sample.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "srfbm/fbm.hpp"
#include "srfbm/harness/config.hpp"
#include "srfbm/harness/sweep.hpp"
#include "srfbm/harness/verify.hpp"
#include "srfbm/parallel.hpp"
#include "srfbm/scaling.hpp"

namespace {

using namespace srfbm;
namespace fs = std::filesystem;

int run_sweep_command(const std::string& config_path, const std::optional<std::string>& out,
                      const std::optional<std::uint64_t>& seed, int workers) {
  auto config = harness::load_config(config_path);
  if (out) config.output = *out;
  if (seed) config.master_seed = *seed;
  if (config.mode == harness::Mode::verify) {
    harness::VerifyOptions vo;
    vo.workers = workers;
    vo.seed = config.master_seed;
    vo.out = &std::cout;
    return harness::run_verify(vo).all_passed() ? 0 : 1;
  }
  harness::SweepOptions so;
  so.workers = workers;
  so.log = &std::cerr;
  const auto result = harness::run_sweep(config, so);
  std::cout << "records: " << result.records_file.string() << '\n'
            << "summary: " << result.summary_file.string() << '\n'
            << "config digest: " << result.config_digest << '\n';
  return result.exit_code;
}

int run_verify_command(const std::optional<std::string>& config_path, const std::optional<std::uint64_t>& seed,
                       int workers) {
  harness::VerifyOptions vo;
  vo.workers = workers;
  vo.out = &std::cout;
  if (config_path) {
    const auto config = harness::load_config(*config_path);
    vo.seed = config.master_seed;
  }
  if (seed) vo.seed = *seed;
  const auto report = harness::run_verify(vo);
  std::size_t failed = 0;
  for (const auto& r : report.results) failed += !r.passed;
  std::cout << (failed == 0 ? "verify: all " : "verify: ") << report.results.size() - failed << '/'
            << report.results.size() << " checks passed\n";
  return report.all_passed() ? 0 : 1;
}

int run_predict_command(int d, double h, double beta, double horizon) {
  const auto p = scaling_prediction(d, h, beta, horizon);
  const auto lemma = lemma_constants(d);
  std::cout.precision(std::numeric_limits<double>::max_digits10);
  std::cout << "regime," << to_string(p.regime) << '\n'
            << "gamma," << p.gamma << '\n'
            << "F," << p.F << '\n'
            << "r_lower," << p.r_lower << '\n'
            << "r_upper," << p.r_upper << '\n'
            << "nu_conjectured," << p.nu_conjectured << '\n'
            << "C_lt," << lemma.c_lower_tail << '\n'
            << "K_d," << lemma.unit_ball_volume << '\n';
  if (horizon > std::numbers::e && beta > 0.0) std::cout << "lambda_star," << lambda_star(d, h, beta, horizon) << '\n';
  return 0;
}

int run_sample_command(int d, double h, double horizon, double dt, std::uint64_t seed, const std::string& backend,
                       const std::optional<std::string>& out) {
  GeneratorOptions options;
  if (backend == "cholesky") options.backend = Backend::cholesky;
  else if (backend == "circulant") options.backend = Backend::circulant;
  const auto grid = TimeGrid::with_step(horizon, dt);
  const Path path = sample_fbm(HurstModel::make(h, d), grid, seed, options);
  std::ofstream file;
  if (out) {
    file.open(*out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + *out);
  }
  std::ostream& os = out ? static_cast<std::ostream&>(file) : std::cout;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "k,t";
  for (int i = 1; i <= d; ++i) os << ",x" << i;
  os << '\n';
  for (int k = 0; k < path.points(); ++k) {
    os << k << ',' << grid.time(k);
    for (int i = 0; i < d; ++i) os << ',' << path(k, i);
    os << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-repelling fractional Brownian motion: sampling, estimation and scaling checks"};
  app.footer(srfbm::harness::config_reference() +
             "\nEnvironment: SRFBM_WORKERS overrides the default worker count.");
  app.require_subcommand(1);

  int workers = srfbm::default_workers();
  std::optional<std::string> config_path, out;
  std::optional<std::uint64_t> seed;

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep described by a config file");
  sweep->add_option("--config", config_path, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory (overrides 'output')");
  sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Master seed (overrides 'master_seed')");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite and print PASS/FAIL per check");
  verify->add_option("--config", config_path, "Config file; only master_seed is used")->check(CLI::ExistingFile);
  verify->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed for the suite");

  int d = 1;
  double h = 0.5, beta = 1.0, horizon = 8.0, dt = 0.25;
  std::string backend = "auto";
  auto* predict = app.add_subcommand("predict", "Print scaling predictions for one (d, H, beta, T)");
  predict->add_option("--d", d, "Dimension")->required();
  predict->add_option("--H", h, "Hurst index")->required();
  predict->add_option("--beta", beta, "Inverse temperature")->required();
  predict->add_option("--T", horizon, "Horizon, > e")->required();

  auto* sample = app.add_subcommand("sample", "Emit one fBm path as CSV");
  sample->add_option("--d", d, "Dimension")->capture_default_str();
  sample->add_option("--H", h, "Hurst index")->capture_default_str();
  sample->add_option("--T", horizon, "Horizon")->capture_default_str();
  sample->add_option("--dt", dt, "Time step")->capture_default_str();
  sample->add_option("--seed", seed, "Seed (default 1)");
  sample->add_option("--backend", backend, "auto | cholesky | circulant")
      ->check(CLI::IsMember({"auto", "cholesky", "circulant"}))
      ->capture_default_str();
  sample->add_option("--out", out, "Output CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_command(*config_path, out, seed, workers);
    if (*verify) return run_verify_command(config_path, seed, workers);
    if (*predict) return run_predict_command(d, h, beta, horizon);
    if (*sample) return run_sample_command(d, h, horizon, dt, seed.value_or(1), backend, out);
  } catch (const std::exception& e) {
    std::cerr << "srfbm: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
