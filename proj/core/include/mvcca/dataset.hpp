#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvcca/matrix.hpp"

namespace mvcca {

// Knobs of the synthetic benchmark; defaults are the standard configuration
// (d=100, n=4000 split 2000/2000, two views, 50 regression tasks).
struct SynthConfig {
  int d = 100;
  int n = 4000;
  int k_views = 2;
  int common_rate = 40;  // percent, even
  double view_noise_scale = 0.5;
  int transform_hidden = 256;
  double transform_gain = 1.0;  // scales the random transform's weights
  int task_count = 50;
  uint64_t seed = 42;
};

struct MultiViewDataset {
  std::vector<Matrix> views;  // d_k x n each
  Matrix tasks;               // J x n
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  std::string source = "synthetic";  // "synthetic" | "external"
  std::optional<SynthConfig> synth;

  int n_samples() const { return views.empty() ? 0 : static_cast<int>(views[0].cols()); }
  int n_views() const { return static_cast<int>(views.size()); }

  Matrix view_train(int k) const { return select_columns(views[k], train_idx); }
  Matrix view_test(int k) const { return select_columns(views[k], test_idx); }
  Matrix tasks_train() const { return select_columns(tasks, train_idx); }
  Matrix tasks_test() const { return select_columns(tasks, test_idx); }

  void validate() const;  // shared n, disjoint covering splits
};

// On-disk layout: view_<k>.csv per view (rows = features, columns =
// samples), tasks.csv, meta.json with provenance/seeds/splits. Every file
// embeds the producing config hash.
void save_dataset(const std::filesystem::path& dir, const MultiViewDataset& data,
                  uint64_t config_hash);
MultiViewDataset load_dataset(const std::filesystem::path& dir);

// Column ranges [train_begin, train_end) and [test_begin, test_end).
struct SplitSpec {
  int train_begin = 0;
  int train_end = 0;
  int test_begin = 0;
  int test_end = 0;
};

// Builds a dataset from external numeric CSVs (same orientation as the
// on-disk format). Ragged or non-numeric input raises ParseError with the
// row/column location.
MultiViewDataset ingest(const std::vector<std::filesystem::path>& view_csvs,
                        const std::filesystem::path& task_csv, const SplitSpec& split);

// Numeric CSV helpers used by the dataset and summary writers. Lines
// starting with '#' are comments and are skipped on read.
void write_matrix_csv(const std::filesystem::path& file, const Matrix& m,
                      const std::vector<std::string>& comments);
Matrix read_matrix_csv(const std::filesystem::path& file);

}  // namespace mvcca
