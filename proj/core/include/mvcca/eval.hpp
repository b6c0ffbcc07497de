#pragma once

#include <vector>

#include "mvcca/dataset.hpp"
#include "mvcca/encoder.hpp"
#include "mvcca/matrix.hpp"
#include "mvcca/noise.hpp"

namespace mvcca {

// Ridge regression on standardized train features (centered, unit row
// variance), R2 on the test block with SST about the test-target mean.
double ridge_r2(const Matrix& z_train, const RowVector& y_train, const Matrix& z_test,
                const RowVector& y_test, double lambda);

struct KfoldResult {
  double mean = 0.0;          // over folds and tasks
  double per_task_std = 0.0;  // std across task means
  std::vector<double> per_task_mean;
};

// Deterministic contiguous fold partition of the columns of z.
KfoldResult kfold_mean_r2(const Matrix& z, const Matrix& tasks, int k, double lambda);

// Relative residual of the best linear reconstruction of x from z.
double reconstruction_loss(const Matrix& z, const Matrix& x);

// Relative residual of the best linear map from enc(x+a) back to enc(x).
double denoising_loss(const Encoder& enc, const Matrix& x, const Matrix& a);

// Normalized eigenvalue sum of the row-cosine-similarity matrix. Zero rows
// are excluded (with a note on stderr); all-zero input is undefined.
double nesum(const Matrix& w);

// Mean nesum over every weight matrix of the encoder.
double encoder_nesum(const Encoder& enc);

// Descending eigenvalues of the row-cosine-similarity matrix.
Vector weight_spectrum(const Matrix& w);

// corr_pair(enc(x), enc(a)) with encoder outputs re-centered.
double corr_with_noise(const Encoder& enc, const Matrix& x, const Matrix& a, double ridge);

// One evaluation snapshot of a model on the test split.
struct Diagnostics {
  double mean_r2 = 0.0;
  double r2_std = 0.0;
  std::vector<double> per_task_r2;
  std::vector<double> corr_with_noise;      // per view, encoded
  std::vector<double> corr_with_noise_raw;  // per view, before encoding
  double nesum_mean = 0.0;
  std::vector<double> recon_loss;    // per view
  std::vector<double> denoise_loss;  // per view
  std::vector<Vector> first_layer_spectrum;
};

struct ProbeOptions {
  double lambda = 1.0;  // downstream ridge on standardized representations
  int folds = 5;
  double ridge = 0.0;  // correlation ridge, matches the training setting
  // The noise-correlation diagnostic compares methods trained with
  // different ridges on one axis, so it gets its own fixed ridge.
  double noise_corr_ridge = 1e-3;
  NoiseDist noise_dist = NoiseDist::gaussian;
  uint64_t noise_seed = 0;
};

Diagnostics probe_model(const std::vector<Encoder>& encoders, const MultiViewDataset& data,
                        const ProbeOptions& opt);

}  // namespace mvcca
