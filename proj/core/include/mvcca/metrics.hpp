#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvcca/train.hpp"

namespace mvcca {

// JSON-lines metric stream: a meta line carrying the config hash, then one
// record per epoch (diagnostics fields present at probe cadence).
void write_metrics_jsonl(const std::filesystem::path& file,
                         const std::vector<MetricRecord>& history, uint64_t config_hash);
std::vector<MetricRecord> read_metrics_jsonl(const std::filesystem::path& file);

// One row of the final summary table (method x common-rate x metric).
struct SummaryRow {
  std::string method;
  int common_rate = -1;  // -1 for external datasets
  int epoch = 0;
  double mean_r2 = 0.0;
  double r2_std = 0.0;
  double corr_value = 0.0;
  double nesum_mean = 0.0;
  double recon_mean = 0.0;
  double denoise_mean = 0.0;
  double corr_with_noise_mean = 0.0;
};

void write_summary_csv(const std::filesystem::path& file, const std::vector<SummaryRow>& rows,
                       uint64_t config_hash);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& file);

}  // namespace mvcca
