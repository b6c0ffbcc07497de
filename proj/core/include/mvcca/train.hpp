#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mvcca/correlation.hpp"
#include "mvcca/dataset.hpp"
#include "mvcca/encoder.hpp"
#include "mvcca/eval.hpp"
#include "mvcca/noise.hpp"

namespace mvcca {

// concat is the no-training baseline (identity encoders on raw views).
enum class Method { linear_cca, dcca, nr_dcca, concat };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct TrainConfig {
  Method method = Method::nr_dcca;
  double learning_rate = 1.5e-2;
  int epochs = 1200;
  int batch_size = 2000;
  double alpha = 200.0;  // regularizer weight; forced to 0 for linear_cca/dcca
  double ridge = 0.0;
  NoiseDist noise_dist = NoiseDist::gaussian;
  uint64_t seed = 42;
  std::vector<int> hidden_dims = {256};
  int embed_dim = 100;
  std::optional<int> nr_subsample;  // rows of X/A used for the raw-side corr
  bool noise_per_batch = false;     // regenerate noise per batch, not per epoch

  void validate() const;
};

struct MetricRecord {
  int epoch = 0;
  double corr_value = 0.0;
  std::vector<double> nr_losses;  // per view; empty when alpha == 0
  std::optional<Diagnostics> diag;
};

struct TrainedModel {
  std::vector<Encoder> encoders;
  std::vector<MetricRecord> history;  // one record per epoch
  TrainConfig config;
};

// Invoked at probe cadence with the current encoders; returns the snapshot
// stored in the epoch's record.
using ProbeFn = std::function<Diagnostics(int epoch, const std::vector<Encoder>&)>;

// One gradient step per epoch on a freshly drawn batch: shuffle, slice,
// center, encode, correlate, regularize, descend with a fixed step.
TrainedModel train(const MultiViewDataset& data, const TrainConfig& cfg,
                   const ProbeFn& probe = nullptr, int cadence = 0);

// Vertical stack of the per-view encodings, (K*m) x n.
Matrix encode_concat(const TrainedModel& model, const std::vector<Matrix>& views);

// Loss and full parameter gradient of one fixed batch/noise configuration;
// the unit the finite-difference checks exercise.
struct LossGrads {
  double loss = 0.0;
  double corr_value = 0.0;
  std::vector<double> nr_losses;
  std::vector<EncoderGrads> per_view;
};

LossGrads nr_loss_and_grads(const std::vector<Encoder>& encoders,
                            const std::vector<ViewBatch>& batches,
                            const std::vector<ViewBatch>& noise, double alpha, double ridge,
                            std::optional<int> nr_subsample);

}  // namespace mvcca
