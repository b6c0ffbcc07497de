#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvcca/dataset.hpp"
#include "mvcca/metrics.hpp"
#include "mvcca/train.hpp"

namespace mvcca {

// One reproducible experiment: a dataset (on disk or synthetic template),
// the training runs to execute on it, and the probing policy.
struct ExperimentConfig {
  std::optional<std::filesystem::path> dataset_path;
  std::optional<SynthConfig> synth;
  std::vector<int> common_rates;  // non-empty: sweep the synth template over CRs
  std::vector<TrainConfig> runs;
  std::vector<std::string> run_labels;  // parallel to runs; defaults to method names
  int cadence = 100;
  double probe_lambda = 1.0;
  std::string out_dir = "out";
  uint64_t master_seed = 42;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& file);
void save_experiment_config(const std::filesystem::path& file, const ExperimentConfig& cfg);

// Named hyperparameter presets. "paper" configs carry the published synthetic
// settings; "reduced" is the fast qualitative variant (n=1000, hidden 64,
// 400 epochs).
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

TrainConfig paper_train_config(Method m);
TrainConfig reduced_train_config(Method m);
SynthConfig reduced_synth_config();

uint64_t experiment_hash(const ExperimentConfig& cfg);
uint64_t run_hash(const TrainConfig& cfg, const MultiViewDataset& data);

// Applies the MVCCA_OUT_ROOT environment override to relative output dirs.
std::filesystem::path resolve_out_dir(const std::string& out_dir);

// Trains one method, probing the test split at the cadence (plus always at
// the final epoch); writes checkpoint.json and metrics.jsonl when dir is
// non-empty.
TrainedModel run_training(const MultiViewDataset& data, const TrainConfig& cfg, int cadence,
                          double probe_lambda, const std::filesystem::path& dir = {});

// No-training baseline: identity encoders on the raw views, one record.
TrainedModel concat_baseline(const MultiViewDataset& data, uint64_t seed, double probe_lambda,
                             const std::filesystem::path& dir = {});

// Re-runs the probe a trained or loaded model would see at its final epoch;
// the same code path as the in-training probe.
Diagnostics evaluate_model(const TrainedModel& model, const MultiViewDataset& data,
                           double probe_lambda);

SummaryRow summary_from(const TrainedModel& model, int common_rate);

struct SweepResult {
  std::vector<SummaryRow> rows;
  std::filesystem::path summary_csv;
};

// methods x common-rate cells, `jobs` worker threads, atomic per-cell
// output, deterministic summary order.
SweepResult run_sweep(const ExperimentConfig& cfg, int jobs);

}  // namespace mvcca
