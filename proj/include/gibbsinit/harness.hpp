#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gibbsinit/initpoint.hpp"
#include "gibbsinit/objective.hpp"
#include "gibbsinit/optimize.hpp"

namespace gibbsinit {

struct SuccessRule {
  // value_gap: value <= reference + tolerance
  // threshold: value < threshold
  // batch_best: value <= best-in-run + margin*|best-in-run|
  std::string mode = "value_gap";
  double reference = 0.0;
  double tolerance = 0.5;
  double threshold = 0.0;
  double margin = 0.01;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string problem;  // st | gmm | gmnl | double_well
  nlohmann::json problem_params = nlohmann::json::object();
  InitPlan init;
  GDConfig optimizer;
  std::uint64_t replications = 1;
  SuccessRule success;
  std::uint64_t master_seed = 0;
  std::size_t histogram_bins = 30;
  std::optional<double> histogram_normalize_by;
  std::string output_dir = "out";
  int workers = 0;  // 0 keeps the ambient worker count
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);
void validate(const ExperimentConfig& cfg);
nlohmann::ordered_json echo_config(const ExperimentConfig& cfg);

struct ReplicationRecord {
  std::uint64_t replication_id = 0;
  std::uint64_t seed = 0;
  std::vector<double> init_point;  // start whose trajectory attained the min
  double convergent_value = 0.0;
  bool success = false;
  bool failed = false;
  std::string failure_code;
  double wall_time_ms = 0.0;
};

struct Histogram {
  std::vector<double> edges;          // bins + 1
  std::vector<std::uint64_t> counts;  // bins; sums to the input size
};

// Equal-width bins over [min, max] of the (optionally normalized) values;
// count conservation is exact. Throws "no-data" on an empty list.
Histogram emit_histogram(const std::vector<double>& values, std::size_t bins,
                         std::optional<double> normalize_by = std::nullopt);

struct RunResult {
  ExperimentConfig config;
  int dim = 0;
  std::vector<ReplicationRecord> records;  // ordered by replication_id
  std::uint64_t failures = 0;
  std::uint64_t successes = 0;
  double success_rate = 0.0;  // successes / completed replications
  double mean_value = 0.0;
  double median_value = 0.0;
  double best_value = 0.0;  // min convergent value across completed records
  Histogram histogram;
  double total_seconds = 0.0;
};

// One full experiment: per replication, derive an independent seed stream,
// build the outsourced empirical loss, run the configured init strategy, run
// the outer optimizer from every candidate, and record the minimum convergent
// value. Failed replications are excluded from aggregates; more than 10%
// failures raises "experiment-unstable".
RunResult run_experiment(const ExperimentConfig& cfg);

// run_experiment once per value with the axis field (beta | n | L) overridden;
// the master seed is shared so values differ only through the axis.
std::vector<RunResult> sweep(const ExperimentConfig& cfg, const std::string& axis,
                             const std::vector<double>& values);

// records.csv, summary.json, histogram.csv under dir. Wall-clock fields
// (records.csv's trailing wall_time_ms column, summary.json's timing object)
// are the only content that varies between identical runs.
void write_run_outputs(const RunResult& result, const std::string& dir);

void write_sweep_outputs(const std::vector<RunResult>& results, const std::string& axis,
                         const std::vector<double>& values, const std::string& dir);

}  // namespace gibbsinit
