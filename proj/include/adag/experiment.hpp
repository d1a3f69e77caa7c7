#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adag/constraints.hpp"
#include "adag/graphs.hpp"
#include "adag/metrics.hpp"
#include "adag/optimizer.hpp"
#include "adag/sem.hpp"

namespace adag::experiment {

/// Named constraint presets: exponential, order1 (log-det), order2..order4
/// (inverse powers 1..3).
constraints::ConstraintSpec preset_constraint(const std::string& name);
bool is_preset_name(const std::string& name);

struct ExperimentConfig {
  graphs::GraphGenSpec graph;
  sem::NoiseFamily noise = sem::NoiseFamily::Gaussian;
  int n_samples = 1000;
  bool normalized = false;
  std::optional<double> mask_threshold;
  std::string preset = "order2";
  optimizer::PathFollowConfig opt;  // opt.constraint is overwritten by the preset
  int replicates = 10;
  std::uint64_t base_seed = 0;
  std::string out_dir;

  void validate() const;
};

/// Parses a config document; unknown keys are an error.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ReplicateRow {
  std::uint64_t seed = 0;
  int d = 0;
  std::string family;
  std::string preset;
  metrics::GraphMetrics m;
  double wall_time_s = 0;
  int s_resets = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<ReplicateRow> rows;
  int failures = 0;
};

/// One replicate of the full generate / sample / learn / score pipeline.
/// Exceptions from any stage are captured as a failed row.
ReplicateRow run_replicate(const ExperimentConfig& cfg, int r);

/// Runs all replicates (in parallel up to ADAG_THREADS workers), writing
/// results.csv and summary.json to cfg.out_dir. Rows appear in replicate
/// order regardless of completion order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string results_csv_text(const ExperimentResult& res);
std::string summary_json_text(const ExperimentResult& res);

}  // namespace adag::experiment
