#include "mvcca/synthgen.hpp"

#include <random>

#include "mvcca/noise.hpp"
#include "mvcca/seed.hpp"

namespace mvcca {

GodEmbedding generate_god(int d, int n, uint64_t seed) {
  if (d < 2) throw ContractViolation("generate_god: d must be at least 2");
  if (n <= d) throw ContractViolation("generate_god: need n > d");
  // sample() already enforces the full-rank guarantee.
  return GodEmbedding{sample(NoiseSpec{NoiseDist::gaussian, d, n, seed})};
}

std::pair<SliceRange, SliceRange> slice_views(int d, int common_rate) {
  if (d < 2 || d % 2 != 0) {
    throw ContractViolation("slice_views: d must be a positive even number");
  }
  if (common_rate < 0 || common_rate > 100 || common_rate % 2 != 0) {
    throw ContractViolation("slice_views: common rate must be even and within [0, 100]");
  }
  if ((common_rate * d) % 200 != 0) {
    throw ContractViolation("slice_views: common_rate*d/200 is not an integer feature count");
  }
  const int half = d / 2;
  const int extend = common_rate * d / 200;
  return {SliceRange{0, half + extend}, SliceRange{half - extend, d}};
}

Matrix apply_view_transform(const Matrix& g_slice, double noise_scale, int hidden,
                            double gain, uint64_t seed) {
  if (gain <= 0.0) throw ContractViolation("apply_view_transform: gain must be positive");
  const int dim = static_cast<int>(g_slice.rows());
  Encoder transform = init_encoder(EncoderKind::mlp, dim, {hidden}, dim, seed_lane(seed, 1));
  for (Layer& l : transform.layers) l.weight *= gain;
  return apply_view_transform_with(transform, g_slice, noise_scale, seed_lane(seed, 0));
}

Matrix apply_view_transform_with(const Encoder& transform, const Matrix& g_slice,
                                 double noise_scale, uint64_t noise_seed) {
  require_nonempty(g_slice, "apply_view_transform input");
  Matrix noisy = g_slice;
  if (noise_scale != 0.0) {
    noisy += noise_scale * sample(NoiseSpec{NoiseDist::gaussian,
                                            static_cast<int>(g_slice.rows()),
                                            static_cast<int>(g_slice.cols()), noise_seed});
  }
  return forward(transform, noisy);
}

Matrix generate_tasks(const Matrix& g, int task_count, uint64_t seed) {
  if (task_count < 1) throw ContractViolation("generate_tasks: need at least one task");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix weights(task_count, g.rows());
  for (int r = 0; r < task_count; ++r) {
    for (Eigen::Index c = 0; c < g.rows(); ++c) weights(r, c) = dist(rng);
  }
  return generate_tasks_with(weights, g);
}

Matrix generate_tasks_with(const Matrix& weights, const Matrix& g) {
  if (weights.cols() != g.rows()) {
    throw ContractViolation("generate_tasks: weight columns must match god dimension");
  }
  return weights * g;
}

MultiViewDataset build_dataset(const SynthConfig& cfg) {
  if (cfg.k_views != 2) {
    throw ContractViolation("build_dataset: the slicing scheme is defined for two views");
  }
  if (cfg.n % 2 != 0) {
    throw ContractViolation("build_dataset: n must be even for the half/half split");
  }
  const GodEmbedding god = generate_god(cfg.d, cfg.n, seed_lane(cfg.seed, lanes::kSynthGod));
  const auto [r1, r2] = slice_views(cfg.d, cfg.common_rate);

  MultiViewDataset data;
  data.source = "synthetic";
  data.synth = cfg;
  const SliceRange ranges[2] = {r1, r2};
  for (int k = 0; k < 2; ++k) {
    const Matrix slice = god.g.middleRows(ranges[k].begin, ranges[k].length());
    data.views.push_back(apply_view_transform(
        slice, cfg.view_noise_scale, cfg.transform_hidden, cfg.transform_gain,
        seed_lane(cfg.seed, seed_lane(lanes::kSynthView, static_cast<uint64_t>(k)))));
  }
  data.tasks = generate_tasks(god.g, cfg.task_count, seed_lane(cfg.seed, lanes::kSynthTasks));

  data.train_idx.resize(cfg.n / 2);
  data.test_idx.resize(cfg.n - cfg.n / 2);
  for (int i = 0; i < cfg.n / 2; ++i) data.train_idx[i] = i;
  for (int i = cfg.n / 2; i < cfg.n; ++i) data.test_idx[i - cfg.n / 2] = i;
  data.validate();
  return data;
}

}  // namespace mvcca
