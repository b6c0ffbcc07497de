#include <doctest.h>

#include "mvcca/encoder.hpp"
#include "test_util.hpp"

using namespace mvcca;
using namespace mvcca::test;

TEST_CASE("init_encoder is deterministic and fan-in bounded") {
  const Encoder a = init_encoder(EncoderKind::mlp, 50, {256}, 100, 7);
  const Encoder b = init_encoder(EncoderKind::mlp, 50, {256}, 100, 7);
  REQUIRE(a.layers.size() == 2);
  CHECK(a.layers[0].weight.rows() == 256);
  CHECK(a.layers[0].weight.cols() == 50);
  CHECK(a.layers[1].weight.rows() == 100);
  CHECK(a.layers[1].weight.cols() == 256);
  for (size_t i = 0; i < a.layers.size(); ++i) {
    CHECK(max_abs_diff(a.layers[i].weight, b.layers[i].weight) == 0.0);
    const double bound = 1.0 / std::sqrt(static_cast<double>(a.layers[i].weight.cols()));
    CHECK(a.layers[i].weight.cwiseAbs().maxCoeff() <= bound);
    CHECK(a.layers[i].bias.cwiseAbs().maxCoeff() == 0.0);
  }

  const Encoder c = init_encoder(EncoderKind::mlp, 50, {256}, 100, 8);
  CHECK(max_abs_diff(a.layers[0].weight, c.layers[0].weight) > 0.0);
}

TEST_CASE("linear encoders have one bias-free layer") {
  const Encoder lin = init_encoder(EncoderKind::linear, 3, {}, 3, 1);
  REQUIRE(lin.layers.size() == 1);
  CHECK(lin.layers[0].weight.rows() == 3);
  CHECK(lin.layers[0].weight.cols() == 3);
  CHECK(!lin.layers[0].has_bias());
  CHECK_THROWS_AS(init_encoder(EncoderKind::linear, 3, {8}, 3, 1), ContractViolation);
  CHECK_THROWS_AS(init_encoder(EncoderKind::mlp, 0, {8}, 3, 1), ContractViolation);
}

TEST_CASE("forward: identity, rectification, and manual recomputation") {
  const Encoder id = identity_encoder(4);
  const Matrix x = randn(4, 9, 2);
  CHECK(max_abs_diff(forward(id, x), x) == 0.0);

  Encoder relu;
  relu.kind = EncoderKind::mlp;
  Matrix w1(2, 1);
  w1 << 1.0, -1.0;
  relu.layers.push_back(Layer{w1, Vector::Zero(2)});
  relu.layers.push_back(Layer{Matrix::Identity(2, 2), Vector::Zero(2)});
  Matrix in(1, 1);
  in << 2.0;
  const Matrix out = forward(relu, in);
  CHECK(out(0, 0) == doctest::Approx(2.0));
  CHECK(out(1, 0) == doctest::Approx(0.0));

  const Encoder mlp = init_encoder(EncoderKind::mlp, 5, {7, 6}, 4, 3);
  const Matrix input = randn(5, 11, 4);
  Matrix manual = input;
  for (size_t i = 0; i < mlp.layers.size(); ++i) {
    Matrix pre = mlp.layers[i].weight * manual;
    pre.colwise() += mlp.layers[i].bias;
    manual = (i + 1 < mlp.layers.size()) ? pre.cwiseMax(0.0) : pre;
  }
  CHECK(max_abs_diff(forward(mlp, input), manual) == 0.0);

  CHECK_THROWS_AS(forward(mlp, randn(6, 11, 5)), ContractViolation);
}

TEST_CASE("backward: linear gradient is the bilinear form") {
  Encoder lin = init_encoder(EncoderKind::linear, 3, {}, 2, 6);
  const Matrix x = randn(3, 8, 7);
  const Matrix up = randn(2, 8, 8);
  const EncoderGrads g = backward(lin, x, up);
  CHECK(max_abs_diff(g.weights[0], up * x.transpose()) < 1e-14);
  CHECK(max_abs_diff(g.input, lin.layers[0].weight.transpose() * up) < 1e-14);
}

TEST_CASE("backward: zero upstream gives zero gradients") {
  const Encoder mlp = init_encoder(EncoderKind::mlp, 4, {5}, 3, 9);
  const Matrix x = randn(4, 6, 10);
  const EncoderGrads g = backward(mlp, x, Matrix::Zero(3, 6));
  for (const Matrix& w : g.weights) CHECK(w.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.input.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward matches central finite differences on a 2-layer MLP") {
  Encoder mlp = init_encoder(EncoderKind::mlp, 4, {6}, 3, 11);
  // random biases so their gradient path is exercised too
  mlp.layers[0].bias = 0.3 * randn(6, 1, 12).col(0);
  mlp.layers[1].bias = 0.3 * randn(3, 1, 13).col(0);
  const Matrix x = randn(4, 10, 14);
  const Matrix up = randn(3, 10, 15);
  const EncoderGrads g = backward(mlp, x, up);

  const auto objective = [&](const Encoder& e) {
    return (up.array() * forward(e, x).array()).sum();
  };
  const double step = 1e-6;
  double max_fd = 0.0, max_err = 0.0;
  for (size_t li = 0; li < mlp.layers.size(); ++li) {
    for (Eigen::Index r = 0; r < mlp.layers[li].weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < mlp.layers[li].weight.cols(); ++c) {
        Encoder hi = mlp, lo = mlp;
        hi.layers[li].weight(r, c) += step;
        lo.layers[li].weight(r, c) -= step;
        const double fd = (objective(hi) - objective(lo)) / (2.0 * step);
        max_fd = std::max(max_fd, std::abs(fd));
        max_err = std::max(max_err, std::abs(fd - g.weights[li](r, c)));
      }
    }
    for (Eigen::Index r = 0; r < mlp.layers[li].bias.size(); ++r) {
      Encoder hi = mlp, lo = mlp;
      hi.layers[li].bias(r) += step;
      lo.layers[li].bias(r) -= step;
      const double fd = (objective(hi) - objective(lo)) / (2.0 * step);
      max_fd = std::max(max_fd, std::abs(fd));
      max_err = std::max(max_err, std::abs(fd - g.biases[li](r)));
    }
  }
  CHECK(max_err / std::max(max_fd, 1e-10) < 1e-4);

  // input gradient as well
  Matrix fd_in(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      Matrix hi = x, lo = x;
      hi(r, c) += step;
      lo(r, c) -= step;
      fd_in(r, c) = ((up.array() * forward(mlp, hi).array()).sum() -
                     (up.array() * forward(mlp, lo).array()).sum()) /
                    (2.0 * step);
    }
  }
  CHECK((fd_in - g.input).cwiseAbs().maxCoeff() /
            std::max(fd_in.cwiseAbs().maxCoeff(), 1e-10) <
        1e-4);
}

TEST_CASE("backward rejects mismatched upstream shapes") {
  const Encoder mlp = init_encoder(EncoderKind::mlp, 4, {5}, 3, 16);
  CHECK_THROWS_AS(backward(mlp, randn(4, 6, 17), randn(2, 6, 18)), ContractViolation);
}
