#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "srfbm/harness/config.hpp"
#include "srfbm/scaling.hpp"

namespace srfbm::harness {

inline constexpr const char* kRecordSchema = "srfbm.records/1";

/// Relative standard error above which a naive estimate is flagged.
inline constexpr double kNaiveRelativeErrorLimit = 0.3;

struct SweepOptions {
  int workers = 1;
  std::ostream* log = nullptr;  // progress and warnings
};

/// One summary.csv row.
struct SummaryRow {
  SweepPoint point;
  std::size_t records = 0;
  double median_rg = 0.0;
  double mean_rg = 0.0;
  double se_rg = 0.0;
  double mean_energy = 0.0;
  std::optional<double> log_estimate;  // log Z_T, or log q for tails
  std::optional<double> log_estimate_se;
  std::optional<double> relative_se;
  std::optional<double> acceptance_rate;
  std::optional<double> pcn_step;
  std::optional<double> lambda;
  std::optional<ScalingPrediction> prediction;  // when T > e and beta > 0
  bool reliable = true;  // false for naive rows over the relative error limit
};

struct SweepResult {
  int exit_code = 0;
  std::string config_digest;
  std::filesystem::path records_file;
  std::filesystem::path summary_file;
  std::vector<SummaryRow> summary;
  std::vector<std::string> failures;
};

/// Runs every (point, replica) task, writes records.jsonl and summary.csv
/// under config.output. On any failure the files keep a ".partial" suffix and
/// exit_code is 1.
SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options = {});

/// Data lines of a records file (everything after the header line).
std::vector<std::string> read_data_lines(const std::filesystem::path& records_file);

/// summary.csv header, comma separated.
std::string summary_columns();

}  // namespace srfbm::harness
