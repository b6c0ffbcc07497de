#include <doctest.h>

#include "mvcca/eval.hpp"
#include "mvcca/linalg.hpp"
#include "mvcca/seed.hpp"
#include "mvcca/synthgen.hpp"
#include "test_util.hpp"

using namespace mvcca;
using namespace mvcca::test;

TEST_CASE("generate_god shape, determinism, moments") {
  const GodEmbedding g = generate_god(100, 4000, 81);
  CHECK(g.g.rows() == 100);
  CHECK(g.g.cols() == 4000);
  CHECK(max_abs_diff(g.g, generate_god(100, 4000, 81).g) == 0.0);
  const double mean = g.g.mean();
  const double var = (g.g.array() - mean).square().sum() / (g.g.size() - 1.0);
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.05);
  CHECK_THROWS_AS(generate_god(100, 100, 81), ContractViolation);
  CHECK_THROWS_AS(generate_god(1, 10, 81), ContractViolation);
}

TEST_CASE("slice_views covers the latent space with the advertised overlap") {
  for (int cr : {0, 20, 40, 60, 80, 100}) {
    const auto [r1, r2] = slice_views(100, cr);
    // enumeration oracle over feature indices
    std::vector<int> hits(100, 0);
    for (int i = r1.begin; i < r1.end; ++i) hits[static_cast<size_t>(i)] += 1;
    for (int i = r2.begin; i < r2.end; ++i) hits[static_cast<size_t>(i)] += 1;
    int overlap = 0, covered = 0;
    for (int h : hits) {
      if (h > 0) ++covered;
      if (h == 2) ++overlap;
    }
    CHECK(covered == 100);  // the union is all of G
    CHECK(overlap == cr);   // percentage of consumed features shared
  }

  const auto [a1, a2] = slice_views(100, 0);
  CHECK(a1.begin == 0);
  CHECK(a1.end == 50);
  CHECK(a2.begin == 50);
  CHECK(a2.end == 100);

  const auto [b1, b2] = slice_views(100, 100);
  CHECK(b1.begin == 0);
  CHECK(b1.end == 100);
  CHECK(b2.begin == 0);
  CHECK(b2.end == 100);

  const auto [c1, c2] = slice_views(100, 40);
  CHECK(c1.end == 70);
  CHECK(c2.begin == 30);

  CHECK_THROWS_AS(slice_views(100, 45), ContractViolation);
  CHECK_THROWS_AS(slice_views(99, 40), ContractViolation);
  CHECK_THROWS_AS(slice_views(10, 30), ContractViolation);  // 30*10/200 not integral
}

TEST_CASE("apply_view_transform with an identity-weight hook is plain rectification") {
  Encoder hook;
  hook.kind = EncoderKind::mlp;
  hook.layers.push_back(Layer{Matrix::Identity(3, 3), Vector::Zero(3)});
  hook.layers.push_back(Layer{Matrix::Identity(3, 3), Vector::Zero(3)});
  const Matrix g = randn(3, 15, 82);
  const Matrix out = apply_view_transform_with(hook, g, 0.0, 0);
  CHECK(max_abs_diff(out, g.cwiseMax(0.0)) == 0.0);
}

TEST_CASE("apply_view_transform determinism and rank") {
  const Matrix g = randn(20, 200, 83);
  const Matrix a = apply_view_transform(g, 0.1, 64, 84);
  const Matrix b = apply_view_transform(g, 0.1, 64, 84);
  CHECK(max_abs_diff(a, b) == 0.0);
  CHECK(a.rows() == g.rows());
  CHECK(a.cols() == g.cols());
  CHECK(numerical_rank(a, 1e-9) == 20);
}

TEST_CASE("generate_tasks hooks and determinism") {
  const Matrix g = randn(6, 50, 85);
  const Matrix t = generate_tasks(g, 9, 86);
  CHECK(t.rows() == 9);
  CHECK(t.cols() == 50);
  CHECK(max_abs_diff(t, generate_tasks(g, 9, 86)) == 0.0);

  Matrix e1 = Matrix::Zero(1, 6);
  e1(0, 0) = 1.0;
  CHECK(max_abs_diff(generate_tasks_with(e1, g), g.row(0)) == 0.0);
}

TEST_CASE("build_dataset wires the full pipeline") {
  SynthConfig cfg;
  cfg.d = 100;
  cfg.n = 400;
  cfg.common_rate = 0;
  cfg.seed = 87;
  const MultiViewDataset data = build_dataset(cfg);
  REQUIRE(data.n_views() == 2);
  CHECK(data.views[0].rows() == 50);
  CHECK(data.views[1].rows() == 50);
  CHECK(data.views[0].cols() == 400);
  CHECK(data.tasks.rows() == 50);
  CHECK(data.tasks.cols() == 400);
  CHECK(data.train_idx.size() == 200);
  CHECK(data.test_idx.size() == 200);
  CHECK(data.train_idx.front() == 0);
  CHECK(data.test_idx.front() == 200);

  SynthConfig full = cfg;
  full.common_rate = 100;
  const MultiViewDataset dfull = build_dataset(full);
  CHECK(dfull.views[0].rows() == 100);
  CHECK(dfull.views[1].rows() == 100);

  const MultiViewDataset again = build_dataset(cfg);
  CHECK(max_abs_diff(data.views[0], again.views[0]) == 0.0);
  CHECK(max_abs_diff(data.views[1], again.views[1]) == 0.0);
  CHECK(max_abs_diff(data.tasks, again.tasks) == 0.0);
}

TEST_CASE("tasks are exactly linear in the god embedding") {
  SynthConfig cfg;
  cfg.d = 40;
  cfg.n = 300;
  cfg.common_rate = 40;
  cfg.seed = 88;
  const GodEmbedding god = generate_god(cfg.d, cfg.n, seed_lane(cfg.seed, lanes::kSynthGod));
  const Matrix tasks = generate_tasks(god.g, 5, 89);
  // a linear probe from G itself must be essentially perfect
  const Matrix z_train = god.g.leftCols(150);
  const Matrix z_test = god.g.rightCols(150);
  for (int j = 0; j < 5; ++j) {
    const RowVector y_train = tasks.row(j).leftCols(150);
    const RowVector y_test = tasks.row(j).rightCols(150);
    CHECK(ridge_r2(z_train, y_train, z_test, y_test, 1e-8) > 0.999);
  }
}
