#include "mvcca/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mvcca/correlation.hpp"
#include "mvcca/seed.hpp"

namespace mvcca {

std::string method_name(Method m) {
  switch (m) {
    case Method::linear_cca: return "linear_cca";
    case Method::dcca: return "dcca";
    case Method::nr_dcca: return "nr_dcca";
    case Method::concat: return "concat";
  }
  throw ContractViolation("unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "linear_cca") return Method::linear_cca;
  if (name == "dcca") return Method::dcca;
  if (name == "nr_dcca") return Method::nr_dcca;
  if (name == "concat") return Method::concat;
  throw ParseError("unknown method '" + name + "'");
}

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ContractViolation("learning_rate must be positive");
  if (epochs < 1) throw ContractViolation("epochs must be positive");
  if (batch_size < 1) throw ContractViolation("batch_size must be positive");
  if (alpha < 0.0) throw ContractViolation("alpha must be non-negative");
  if (ridge < 0.0) throw ContractViolation("ridge must be non-negative");
  if (embed_dim < 1) throw ContractViolation("embed_dim must be positive");
  for (int h : hidden_dims) {
    if (h < 1) throw ContractViolation("hidden dimensions must be positive");
  }
  if (nr_subsample && *nr_subsample < 1) {
    throw ContractViolation("nr_subsample must be positive when set");
  }
}

namespace {

ViewBatch recenter(const Matrix& m) {
  Matrix out = m;
  out.colwise() -= Vector(m.rowwise().mean());
  return ViewBatch::assume_centered(std::move(out));
}

// Chain a gradient wrt centered output back through the row-centering map.
Matrix through_centering(const Matrix& dz) {
  Matrix out = dz;
  out.colwise() -= Vector(dz.rowwise().mean());
  return out;
}

ViewBatch top_rows(const ViewBatch& v, int rows) {
  return ViewBatch::assume_centered(v.data.topRows(std::min<Eigen::Index>(rows, v.data.rows())));
}

}  // namespace

LossGrads nr_loss_and_grads(const std::vector<Encoder>& encoders,
                            const std::vector<ViewBatch>& batches,
                            const std::vector<ViewBatch>& noise, double alpha, double ridge,
                            std::optional<int> nr_subsample) {
  const size_t k_views = encoders.size();
  if (batches.size() != k_views || k_views < 2) {
    throw ContractViolation("nr_loss_and_grads: need one batch per encoder, two views up");
  }
  const Eigen::Index nb = batches[0].data.cols();

  LossGrads out;
  std::vector<ForwardTrace> traces(k_views);
  std::vector<ViewBatch> zx(k_views);
  std::vector<Matrix> dzx(k_views);
  for (size_t k = 0; k < k_views; ++k) {
    const Matrix e = forward(encoders[k], batches[k].data, traces[k]);
    zx[k] = recenter(e);
    dzx[k] = Matrix::Zero(e.rows(), e.cols());
    out.per_view.push_back(zero_grads(encoders[k], nb));
  }

  for (size_t k = 0; k < k_views; ++k) {
    for (size_t j = k + 1; j < k_views; ++j) {
      const PairGrad pg = corr_pair_grad(zx[k], zx[j], ridge);
      out.corr_value += pg.value;
      dzx[k] -= pg.g1;  // loss carries -corr
      dzx[j] -= pg.g2;
    }
  }

  if (alpha > 0.0) {
    if (noise.size() != k_views) {
      throw ContractViolation("nr_loss_and_grads: need one noise batch per view");
    }
    for (size_t k = 0; k < k_views; ++k) {
      ForwardTrace trace_a;
      const Matrix ea = forward(encoders[k], noise[k].data, trace_a);
      const ViewBatch za = recenter(ea);
      const PairGrad pg = corr_pair_grad(zx[k], za, ridge);

      ViewBatch raw_x = batches[k];
      ViewBatch raw_a = noise[k];
      if (nr_subsample) {
        raw_x = top_rows(raw_x, *nr_subsample);
        raw_a = top_rows(raw_a, *nr_subsample);
      }
      const double raw_val = corr_pair(raw_x, raw_a, ridge).value;

      const double u = pg.value - raw_val;
      out.nr_losses.push_back(std::abs(u));
      const double sgn = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
      dzx[k] += (alpha * sgn) * pg.g1;

      const Matrix dea = through_centering((alpha * sgn) * pg.g2);
      out.per_view[k].add_scaled(backward(encoders[k], trace_a, dea), 1.0);
    }
  }

  for (size_t k = 0; k < k_views; ++k) {
    const Matrix dex = through_centering(dzx[k]);
    out.per_view[k].add_scaled(backward(encoders[k], traces[k], dex), 1.0);
  }

  out.loss = -out.corr_value;
  for (double z : out.nr_losses) out.loss += alpha * z;
  return out;
}

TrainedModel train(const MultiViewDataset& data, const TrainConfig& cfg, const ProbeFn& probe,
                   int cadence) {
  cfg.validate();
  data.validate();
  if (cfg.method == Method::concat) {
    throw ContractViolation("concat is an evaluation-only baseline, nothing to train");
  }

  TrainConfig norm = cfg;
  if (cfg.method == Method::linear_cca) {
    norm.alpha = 0.0;
    norm.hidden_dims.clear();
  } else if (cfg.method == Method::dcca) {
    norm.alpha = 0.0;
  }

  const int k_views = data.n_views();
  const int n_train = static_cast<int>(data.train_idx.size());
  if (n_train < 2) throw ContractViolation("train: need at least two train samples");
  const int nb = std::min(norm.batch_size, n_train);

  const uint64_t init_base = seed_lane(norm.seed, lanes::kInit);
  const uint64_t noise_base = seed_lane(norm.seed, lanes::kNoise);
  const uint64_t shuffle_base = seed_lane(norm.seed, lanes::kShuffle);

  TrainedModel model;
  model.config = norm;
  std::vector<Matrix> xtr;
  for (int k = 0; k < k_views; ++k) {
    const int d_k = static_cast<int>(data.views[static_cast<size_t>(k)].rows());
    const uint64_t s = seed_lane(init_base, static_cast<uint64_t>(k));
    if (norm.method == Method::linear_cca) {
      model.encoders.push_back(
          init_encoder(EncoderKind::linear, d_k, {}, norm.embed_dim, s));
    } else {
      model.encoders.push_back(
          init_encoder(EncoderKind::mlp, d_k, norm.hidden_dims, norm.embed_dim, s));
    }
    xtr.push_back(data.view_train(k));
  }

  std::vector<int> order(static_cast<size_t>(n_train));
  for (int epoch = 1; epoch <= norm.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(seed_lane(shuffle_base, static_cast<uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const std::vector<int> bidx(order.begin(), order.begin() + nb);

    std::vector<ViewBatch> batches;
    std::vector<ViewBatch> noise;
    for (int k = 0; k < k_views; ++k) {
      batches.push_back(center_rows(select_columns(xtr[static_cast<size_t>(k)], bidx)));
    }
    if (norm.alpha > 0.0) {
      uint64_t epoch_seed = seed_lane(noise_base, static_cast<uint64_t>(epoch));
      if (norm.noise_per_batch) epoch_seed = seed_lane(epoch_seed, 0);
      for (int k = 0; k < k_views; ++k) {
        const int d_k = static_cast<int>(xtr[static_cast<size_t>(k)].rows());
        noise.push_back(center_rows(sample(NoiseSpec{
            norm.noise_dist, d_k, nb, seed_lane(epoch_seed, static_cast<uint64_t>(k))})));
      }
    }

    LossGrads lg;
    try {
      lg = nr_loss_and_grads(model.encoders, batches, noise, norm.alpha, norm.ridge,
                             norm.nr_subsample);
    } catch (const NonFiniteError& e) {
      throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) + ": " +
                                 e.what(),
                             epoch);
    }
    if (!std::isfinite(lg.loss)) {
      throw TrainingDiverged("training loss became non-finite at epoch " +
                                 std::to_string(epoch),
                             epoch);
    }

    for (int k = 0; k < k_views; ++k) {
      Encoder& enc = model.encoders[static_cast<size_t>(k)];
      const EncoderGrads& g = lg.per_view[static_cast<size_t>(k)];
      for (size_t i = 0; i < enc.layers.size(); ++i) {
        enc.layers[i].weight -= norm.learning_rate * g.weights[i];
        if (enc.layers[i].has_bias()) {
          enc.layers[i].bias -= norm.learning_rate * g.biases[i];
        }
      }
      if (!enc.parameters_finite()) {
        throw TrainingDiverged("encoder parameters became non-finite at epoch " +
                                   std::to_string(epoch),
                               epoch);
      }
    }

    MetricRecord rec;
    rec.epoch = epoch;
    rec.corr_value = lg.corr_value;
    rec.nr_losses = lg.nr_losses;
    if (probe && cadence > 0 && (epoch % cadence == 0 || epoch == norm.epochs)) {
      rec.diag = probe(epoch, model.encoders);
    }
    model.history.push_back(std::move(rec));
  }
  return model;
}

Matrix encode_concat(const TrainedModel& model, const std::vector<Matrix>& views) {
  if (views.size() != model.encoders.size()) {
    throw ContractViolation("encode_concat: view count does not match the model");
  }
  std::vector<Matrix> encoded;
  Eigen::Index rows = 0;
  for (size_t k = 0; k < views.size(); ++k) {
    encoded.push_back(forward(model.encoders[k], views[k]));
    rows += encoded.back().rows();
    if (encoded.back().cols() != encoded[0].cols()) {
      throw ContractViolation("encode_concat: views disagree on sample count");
    }
  }
  Matrix z(rows, encoded[0].cols());
  Eigen::Index at = 0;
  for (const Matrix& e : encoded) {
    z.middleRows(at, e.rows()) = e;
    at += e.rows();
  }
  return z;
}

}  // namespace mvcca
