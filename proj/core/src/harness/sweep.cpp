#include "srfbm/harness/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "srfbm/estimators.hpp"
#include "srfbm/girsanov.hpp"
#include "srfbm/parallel.hpp"
#include "srfbm/rng.hpp"
#include "srfbm/sampler.hpp"
#include "srfbm/stats.hpp"

namespace srfbm::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// What one (point, replica) task produced.
struct TaskOutput {
  std::vector<RunRecord> chain_records;  // mcmc
  std::vector<PathSummary> paths;        // estimator modes
  double lambda = 0.0;
  bool done = false;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double tilt_strength(const SweepConfig& config, const ModelParams& m) {
  return config.lambda ? *config.lambda : lambda_star(m.dim, m.hurst, m.beta, m.horizon);
}

json point_fields(json& j, const SweepPoint& p) {
  j["d"] = p.model.dim;
  j["H"] = p.model.hurst;
  j["beta"] = p.model.beta;
  j["T"] = p.model.horizon;
  j["n"] = p.model.steps;
  j["r"] = p.radius ? json(*p.radius) : json(nullptr);
  return j;
}

json chain_line(const std::string& digest, const SweepPoint& p, const RunRecord& rec) {
  json j;
  j["config_digest"] = digest;
  j["point_index"] = p.index;
  j["replica"] = rec.replica;
  j["seed"] = rec.seed;
  point_fields(j, p);
  j["sample_index"] = rec.sample_index;
  j["step"] = rec.step;
  j["r_gyration"] = rec.r_gyration;
  j["energy"] = rec.energy;
  j["end_to_end_sq"] = rec.end_to_end_sq;
  j["acceptance_rate"] = rec.acceptance_rate;
  j["pcn_step"] = rec.pcn_step;
  j["log_rn_weight"] = nullptr;
  j["log_estimate"] = nullptr;
  j["std_error"] = nullptr;
  j["sample_size"] = nullptr;
  return j;
}

std::vector<double> log_weights(const SweepConfig& config, const SweepPoint& p, const std::vector<PathSummary>& paths) {
  std::vector<double> w(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    double lw = -p.model.beta * paths[i].energy - paths[i].log_rn_weight;
    if (config.mode == Mode::tails) {
      const bool in = config.side == TailSide::below ? paths[i].r_gyration <= *p.radius
                                                     : paths[i].r_gyration >= *p.radius;
      if (!in) lw = -std::numeric_limits<double>::infinity();
    }
    w[i] = lw;
  }
  return w;
}

EstimatorMethod method_of(Mode mode) {
  return mode == Mode::importance ? EstimatorMethod::importance : EstimatorMethod::naive;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// One line per estimator replica: the replica's estimate and path averages.
json estimate_line(const SweepConfig& config, const std::string& digest, const SweepPoint& p, std::size_t replica,
                   std::uint64_t seed, const TaskOutput& out) {
  const auto lw = log_weights(config, p, out.paths);
  const auto est = estimate_from_log_weights(lw, method_of(config.mode));
  double rg = 0.0, en = 0.0, e2e = 0.0, lq = 0.0;
  for (const auto& s : out.paths) {
    rg += s.r_gyration;
    en += s.energy;
    e2e += s.end_to_end_sq;
    lq += s.log_rn_weight;
  }
  const double m = static_cast<double>(out.paths.size());
  json j;
  j["config_digest"] = digest;
  j["point_index"] = p.index;
  j["replica"] = replica;
  j["seed"] = seed;
  point_fields(j, p);
  j["sample_index"] = 0;
  j["step"] = nullptr;
  j["r_gyration"] = rg / m;
  j["energy"] = en / m;
  j["end_to_end_sq"] = e2e / m;
  j["acceptance_rate"] = nullptr;
  j["pcn_step"] = nullptr;
  j["log_rn_weight"] = config.mode == Mode::importance ? json(lq / m) : json(nullptr);
  j["log_estimate"] = nullable(est.log_value);
  j["std_error"] = est.std_error;
  j["sample_size"] = est.sample_size;
  if (config.mode == Mode::importance) j["lambda"] = out.lambda;
  return j;
}

SummaryRow summarize(const SweepConfig& config, const SweepPoint& p, const std::vector<TaskOutput>& outs) {
  SummaryRow row;
  row.point = p;
  std::vector<double> rg_all, replica_means, energies;
  if (config.mode == Mode::mcmc) {
    std::vector<double> acc, steps;
    for (const auto& o : outs) {
      double s = 0.0;
      for (const auto& r : o.chain_records) {
        rg_all.push_back(r.r_gyration);
        energies.push_back(r.energy);
        s += r.r_gyration;
      }
      if (!o.chain_records.empty()) {
        replica_means.push_back(s / static_cast<double>(o.chain_records.size()));
        acc.push_back(o.chain_records.back().acceptance_rate);
        steps.push_back(o.chain_records.back().pcn_step);
      }
    }
    if (!acc.empty()) {
      row.acceptance_rate = pairwise_sum(acc) / static_cast<double>(acc.size());
      row.pcn_step = pairwise_sum(steps) / static_cast<double>(steps.size());
    }
  } else {
    std::vector<double> lw_all;
    for (const auto& o : outs) {
      double s = 0.0;
      for (const auto& path : o.paths) {
        rg_all.push_back(path.r_gyration);
        energies.push_back(path.energy);
        s += path.r_gyration;
      }
      const auto lw = log_weights(config, p, o.paths);
      lw_all.insert(lw_all.end(), lw.begin(), lw.end());
      if (!o.paths.empty()) replica_means.push_back(s / static_cast<double>(o.paths.size()));
    }
    const auto est = estimate_from_log_weights(lw_all, method_of(config.mode));
    row.log_estimate = est.log_value;
    row.log_estimate_se = est.log_std_error;
    row.relative_se = est.relative_std_error;
    if (config.mode == Mode::importance && !outs.empty()) row.lambda = outs.front().lambda;
    if (config.mode == Mode::naive && est.relative_std_error > kNaiveRelativeErrorLimit) row.reliable = false;
  }
  row.records = rg_all.size();
  if (!rg_all.empty()) {
    row.median_rg = median(rg_all);
    row.mean_energy = pairwise_sum(energies) / static_cast<double>(energies.size());
  }
  if (!replica_means.empty()) {
    row.mean_rg = pairwise_sum(replica_means) / static_cast<double>(replica_means.size());
    row.se_rg = replica_means.size() >= 2 ? mean_and_error(replica_means).std_error : 0.0;
  }
  if (p.model.horizon > std::numbers::e && p.model.beta > 0.0) {
    row.prediction = scaling_prediction(p.model.dim, p.model.hurst, p.model.beta, p.model.horizon);
  }
  return row;
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

std::string csv_row(const SweepConfig& config, const SummaryRow& r) {
  const auto& m = r.point.model;
  std::ostringstream os;
  os << r.point.index << ',' << m.dim << ',' << csv_number(m.hurst) << ',' << csv_number(m.beta) << ','
     << csv_number(m.horizon) << ',' << m.steps << ',' << csv_number(config.dt) << ','
     << (r.point.radius ? csv_number(*r.point.radius) : std::string()) << ',' << to_string(config.mode) << ','
     << config.replicas << ',' << r.records << ',' << csv_number(r.median_rg) << ',' << csv_number(r.mean_rg) << ','
     << csv_number(r.se_rg) << ',' << csv_number(r.mean_energy) << ',' << csv_optional(r.log_estimate) << ','
     << csv_optional(r.log_estimate_se) << ',' << csv_optional(r.relative_se) << ','
     << csv_optional(r.acceptance_rate) << ',' << csv_optional(r.pcn_step) << ',' << csv_optional(r.lambda) << ',';
  if (r.prediction) {
    const auto& p = *r.prediction;
    os << to_string(p.regime) << ',' << csv_number(p.r_lower) << ',' << csv_number(p.r_upper) << ','
       << csv_number(p.nu_conjectured) << ',' << (p.r_lower <= p.r_upper ? 1 : 0);
  } else {
    os << ",,,,";
  }
  os << ',' << (r.reliable ? 1 : 0) << '\n';
  return os.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string summary_columns() {
  return "point_index,d,H,beta,T,n,dt,r,mode,replicas,records,median_RT,mean_RT,se_RT,mean_energy,log_estimate,"
         "log_estimate_se,relative_se,acceptance_rate,pcn_step,lambda,regime,r_lower,r_upper,nu_conjectured,"
         "bounds_ordered,reliable";
}

SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options) {
  config.validate();
  if (config.mode == Mode::verify) throw ParseError("key 'mode': run_sweep does not handle mode=verify");
  SweepResult result;
  result.config_digest = stable_digest(canonical(config));
  const auto points = expand_grid(config);
  const std::size_t replicas = static_cast<std::size_t>(config.replicas);
  const std::size_t tasks = points.size() * replicas;

  GeneratorOptions generator;
  generator.backend = config.backend;

  std::vector<TaskOutput> outputs(tasks);
  std::vector<std::string> errors(tasks);
  std::mutex log_mutex;
  std::size_t finished = 0;

  parallel_for(tasks, std::max(1, options.workers), [&](std::size_t task) {
    const SweepPoint& p = points[task / replicas];
    const std::size_t replica = task % replicas;
    const std::uint64_t seed = mix64(config.master_seed, p.index, replica);
    try {
      TaskOutput& out = outputs[task];
      if (config.mode == Mode::mcmc) {
        ChainConfig chain;
        chain.model = p.model;
        chain.pcn_step = config.pcn_step;
        chain.burn_in = config.burn_in;
        chain.thin = config.thin;
        chain.total_samples = config.samples;
        chain.seed = seed;
        chain.adapt_target = config.adapt_target;
        chain.generator = generator;
        auto run = run_chain(chain);
        for (auto& rec : run.records) {
          rec.config_digest = result.config_digest;
          rec.point_index = p.index;
          rec.replica = replica;
        }
        out.chain_records = std::move(run.records);
      } else {
        EstimatorOptions eo;
        eo.workers = 1;
        eo.generator = generator;
        if (config.mode == Mode::importance) {
          out.lambda = tilt_strength(config, p.model);
          out.paths = summarize_tilted_paths(p.model, TiltSpec(out.lambda, p.model.dim), config.mc_samples, seed, eo);
        } else {
          out.paths = summarize_paths(p.model, config.mc_samples, seed, eo);
        }
      }
      out.done = true;
    } catch (const std::exception& e) {
      errors[task] = "point " + std::to_string(p.index) + " replica " + std::to_string(replica) + ": " + e.what();
    }
    if (options.log) {
      std::lock_guard lock(log_mutex);
      ++finished;
      *options.log << "\r[" << finished << '/' << tasks << "] tasks" << std::flush;
    }
  });
  if (options.log) *options.log << '\n';

  for (const auto& e : errors) {
    if (!e.empty()) result.failures.push_back(e);
  }

  // Assemble in (point, replica, sample) order regardless of scheduling.
  json header;
  header["schema"] = kRecordSchema;
  header["config_digest"] = result.config_digest;
  header["mode"] = to_string(config.mode);
  header["config"] = canonical(config);
  header["workers"] = options.workers;
  header["created"] = utc_timestamp();
  std::string records = header.dump() + '\n';
  std::string summary = summary_columns() + '\n';

  for (const auto& p : points) {
    std::vector<TaskOutput> point_outputs;
    for (std::size_t replica = 0; replica < replicas; ++replica) {
      const std::size_t task = p.index * replicas + replica;
      const TaskOutput& out = outputs[task];
      if (!out.done) continue;
      if (config.mode == Mode::mcmc) {
        for (const auto& rec : out.chain_records) records += chain_line(result.config_digest, p, rec).dump() + '\n';
      } else {
        const auto seed = mix64(config.master_seed, p.index, replica);
        records += estimate_line(config, result.config_digest, p, replica, seed, out).dump() + '\n';
      }
      point_outputs.push_back(out);
    }
    if (point_outputs.empty()) continue;
    SummaryRow row = summarize(config, p, point_outputs);
    if (!row.reliable && options.log) {
      *options.log << "warning: point " << p.index << " naive relative standard error "
                   << *row.relative_se << " exceeds " << kNaiveRelativeErrorLimit
                   << "; use mode=importance at this T\n";
    }
    if (row.prediction && row.prediction->r_lower > row.prediction->r_upper && options.log) {
      *options.log << "note: point " << p.index << " has r_lower > r_upper (T below the regime crossover)\n";
    }
    summary += csv_row(config, row);
    result.summary.push_back(std::move(row));
  }

  const fs::path dir(config.output);
  fs::create_directories(dir);
  const fs::path records_final = dir / "records.jsonl";
  const fs::path summary_final = dir / "summary.csv";
  const fs::path records_partial = dir / "records.jsonl.partial";
  const fs::path summary_partial = dir / "summary.csv.partial";
  write_file(records_partial, records);
  write_file(summary_partial, summary);

  if (!result.failures.empty()) {
    result.exit_code = 1;
    result.records_file = records_partial;
    result.summary_file = summary_partial;
    if (options.log) {
      for (const auto& f : result.failures) *options.log << "error: " << f << '\n';
    }
    return result;
  }
  fs::rename(records_partial, records_final);
  fs::rename(summary_partial, summary_final);
  result.records_file = records_final;
  result.summary_file = summary_final;
  return result;
}

std::vector<std::string> read_data_lines(const fs::path& records_file) {
  std::ifstream in(records_file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + records_file.string());
  std::vector<std::string> lines;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    lines.push_back(line);
  }
  return lines;
}

}  // namespace srfbm::harness
