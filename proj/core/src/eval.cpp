#include "mvcca/eval.hpp"

#include <cmath>
#include <cstdio>

#include "mvcca/correlation.hpp"
#include "mvcca/linalg.hpp"
#include "mvcca/seed.hpp"

namespace mvcca {

double ridge_r2(const Matrix& z_train, const RowVector& y_train, const Matrix& z_test,
                const RowVector& y_test, double lambda) {
  if (lambda < 0.0) throw ContractViolation("ridge_r2: lambda must be non-negative");
  if (z_train.cols() != y_train.size() || z_test.cols() != y_test.size() ||
      z_train.rows() != z_test.rows()) {
    throw ContractViolation("ridge_r2: inconsistent shapes");
  }
  const double n = static_cast<double>(z_train.cols());
  if (n < 2) throw ContractViolation("ridge_r2: need at least two train samples");

  const Vector mu = z_train.rowwise().mean();
  Matrix zc = z_train.colwise() - mu;
  Vector sd = (zc.array().square().rowwise().sum() / (n - 1.0)).sqrt();
  for (Eigen::Index i = 0; i < sd.size(); ++i) {
    if (sd(i) == 0.0) sd(i) = 1.0;
  }
  zc.array().colwise() /= sd.array();

  const double y_mean = y_train.mean();
  const RowVector yc = y_train.array() - y_mean;
  if ((y_train.array() - y_mean).abs().maxCoeff() == 0.0) {
    throw UndefinedMetric("ridge_r2: zero-variance train target");
  }

  Matrix gram = zc * zc.transpose();
  gram.diagonal().array() += lambda;
  const Vector w = Eigen::LDLT<Matrix>(gram).solve(zc * yc.transpose());

  Matrix zt = z_test.colwise() - mu;
  zt.array().colwise() /= sd.array();
  const RowVector pred = (w.transpose() * zt).array() + y_mean;

  const double test_mean = y_test.mean();
  const double sst = (y_test.array() - test_mean).square().sum();
  if (sst == 0.0) throw UndefinedMetric("ridge_r2: zero-variance test target");
  const double sse = (pred - y_test).array().square().sum();
  return 1.0 - sse / sst;
}

KfoldResult kfold_mean_r2(const Matrix& z, const Matrix& tasks, int k, double lambda) {
  const Eigen::Index n = z.cols();
  if (tasks.cols() != n) throw ContractViolation("kfold_mean_r2: column counts differ");
  if (k < 2 || n < k) throw ContractViolation("kfold_mean_r2: need 2 <= k <= n");

  std::vector<int> bounds(static_cast<size_t>(k) + 1);
  for (int f = 0; f <= k; ++f) {
    bounds[static_cast<size_t>(f)] = static_cast<int>(n) * f / k;
  }

  KfoldResult out;
  out.per_task_mean.resize(static_cast<size_t>(tasks.rows()), 0.0);
  for (Eigen::Index j = 0; j < tasks.rows(); ++j) {
    double task_sum = 0.0;
    for (int f = 0; f < k; ++f) {
      const int lo = bounds[static_cast<size_t>(f)];
      const int hi = bounds[static_cast<size_t>(f) + 1];
      const int n_test = hi - lo;
      const int n_train = static_cast<int>(n) - n_test;
      Matrix z_train(z.rows(), n_train), z_test(z.rows(), n_test);
      RowVector y_train(n_train), y_test(n_test);
      int it = 0;
      for (int c = 0; c < static_cast<int>(n); ++c) {
        if (c >= lo && c < hi) {
          z_test.col(c - lo) = z.col(c);
          y_test(c - lo) = tasks(j, c);
        } else {
          z_train.col(it) = z.col(c);
          y_train(it) = tasks(j, c);
          ++it;
        }
      }
      task_sum += ridge_r2(z_train, y_train, z_test, y_test, lambda);
    }
    out.per_task_mean[static_cast<size_t>(j)] = task_sum / k;
  }

  double mean = 0.0;
  for (double v : out.per_task_mean) mean += v;
  mean /= static_cast<double>(out.per_task_mean.size());
  double var = 0.0;
  for (double v : out.per_task_mean) var += (v - mean) * (v - mean);
  var /= static_cast<double>(out.per_task_mean.size());
  out.mean = mean;
  out.per_task_std = std::sqrt(var);
  return out;
}

double reconstruction_loss(const Matrix& z, const Matrix& x) {
  if (z.cols() != x.cols()) throw ContractViolation("reconstruction_loss: column counts differ");
  const double denom = x.norm();
  if (denom == 0.0) throw UndefinedMetric("reconstruction_loss: zero reference matrix");
  const Matrix p = least_squares(z, x);
  return (p * z - x).norm() / denom;
}

double denoising_loss(const Encoder& enc, const Matrix& x, const Matrix& a) {
  if (x.rows() != a.rows() || x.cols() != a.cols()) {
    throw ContractViolation("denoising_loss: x and a must share a shape");
  }
  const Matrix clean = forward(enc, x);
  const Matrix noisy = forward(enc, x + a);
  const double denom = clean.norm();
  if (denom == 0.0) throw UndefinedMetric("denoising_loss: zero encoded reference");
  const Matrix q = least_squares(noisy, clean);
  return (q * noisy - clean).norm() / denom;
}

namespace {

// Row-cosine-similarity matrix over the non-zero rows of w.
Matrix cosine_similarity(const Matrix& w) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    if (w.row(r).norm() > 0.0) keep.push_back(r);
  }
  if (keep.empty()) throw UndefinedMetric("cosine similarity of an all-zero matrix");
  if (static_cast<Eigen::Index>(keep.size()) < w.rows()) {
    std::fprintf(stderr, "mvcca: excluding %ld zero rows from similarity matrix\n",
                 static_cast<long>(w.rows() - static_cast<Eigen::Index>(keep.size())));
  }
  Matrix rows(static_cast<Eigen::Index>(keep.size()), w.cols());
  for (size_t i = 0; i < keep.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = w.row(keep[i]).normalized();
  }
  Matrix s = rows * rows.transpose();
  return 0.5 * (s + s.transpose());
}

}  // namespace

double nesum(const Matrix& w) {
  const Matrix s = cosine_similarity(w);
  const SymEig dec = sym_eig(s);
  const double top = dec.values(0);
  return dec.values.sum() / top / static_cast<double>(s.rows());
}

double encoder_nesum(const Encoder& enc) {
  double total = 0.0;
  for (const Layer& l : enc.layers) total += nesum(l.weight);
  return total / static_cast<double>(enc.layers.size());
}

Vector weight_spectrum(const Matrix& w) {
  return sym_eig(cosine_similarity(w)).values;
}

double corr_with_noise(const Encoder& enc, const Matrix& x, const Matrix& a, double ridge) {
  const ViewBatch zx = center_rows(forward(enc, x));
  const ViewBatch za = center_rows(forward(enc, a));
  return corr_pair(zx, za, ridge).value;
}

Diagnostics probe_model(const std::vector<Encoder>& encoders, const MultiViewDataset& data,
                        const ProbeOptions& opt) {
  const int k_views = data.n_views();
  if (static_cast<int>(encoders.size()) != k_views) {
    throw ContractViolation("probe_model: encoder count does not match view count");
  }

  Diagnostics diag;
  std::vector<Matrix> encoded;
  Eigen::Index total_rows = 0;
  for (int k = 0; k < k_views; ++k) {
    encoded.push_back(forward(encoders[static_cast<size_t>(k)], data.view_test(k)));
    total_rows += encoded.back().rows();
  }
  Matrix z(total_rows, encoded[0].cols());
  Eigen::Index at = 0;
  for (const Matrix& e : encoded) {
    z.middleRows(at, e.rows()) = e;
    at += e.rows();
  }

  const KfoldResult kf = kfold_mean_r2(z, data.tasks_test(), opt.folds, opt.lambda);
  diag.mean_r2 = kf.mean;
  diag.r2_std = kf.per_task_std;
  diag.per_task_r2 = kf.per_task_mean;

  double nesum_total = 0.0;
  int nesum_count = 0;
  for (int k = 0; k < k_views; ++k) {
    const Encoder& enc = encoders[static_cast<size_t>(k)];
    const Matrix x = data.view_test(k);
    const Matrix a = sample(NoiseSpec{opt.noise_dist, static_cast<int>(x.rows()),
                                      static_cast<int>(x.cols()),
                                      seed_lane(opt.noise_seed, static_cast<uint64_t>(k))});
    diag.corr_with_noise.push_back(corr_with_noise(enc, x, a, opt.noise_corr_ridge));
    diag.corr_with_noise_raw.push_back(
        corr_pair(center_rows(x), center_rows(a), opt.noise_corr_ridge).value);
    diag.recon_loss.push_back(reconstruction_loss(encoded[static_cast<size_t>(k)], x));
    diag.denoise_loss.push_back(denoising_loss(enc, x, a));
    diag.first_layer_spectrum.push_back(weight_spectrum(enc.layers.front().weight));
    for (const Layer& l : enc.layers) {
      nesum_total += nesum(l.weight);
      ++nesum_count;
    }
  }
  diag.nesum_mean = nesum_total / nesum_count;
  return diag;
}

}  // namespace mvcca
