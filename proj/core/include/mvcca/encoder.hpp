#pragma once

#include <cstdint>
#include <vector>

#include "mvcca/matrix.hpp"

namespace mvcca {

enum class EncoderKind { linear, mlp };

struct Layer {
  Matrix weight;  // out x in
  Vector bias;    // size out, empty when the layer is bias-free
  bool has_bias() const { return bias.size() > 0; }
};

// A per-view map: either a single linear matrix or an MLP with ReLU between
// layers (never after the last one).
struct Encoder {
  EncoderKind kind = EncoderKind::linear;
  std::vector<Layer> layers;

  int input_dim() const { return static_cast<int>(layers.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().weight.rows()); }
  bool parameters_finite() const;
};

// Weights ~ U(-1/sqrt(in), 1/sqrt(in)), biases zero (linear kind carries no
// bias at all). Deterministic per seed.
Encoder init_encoder(EncoderKind kind, int input_dim, const std::vector<int>& hidden_dims,
                     int output_dim, uint64_t seed);

// Identity map of dimension d (linear, W = I). Used by the concat baseline.
Encoder identity_encoder(int d);

// Post-activation values of every stage; activations[0] is the input, the
// last entry is the encoder output.
struct ForwardTrace {
  std::vector<Matrix> activations;
};

Matrix forward(const Encoder& enc, const Matrix& x);
Matrix forward(const Encoder& enc, const Matrix& x, ForwardTrace& trace);

struct EncoderGrads {
  std::vector<Matrix> weights;  // same shapes as enc.layers[i].weight
  std::vector<Vector> biases;   // zero-sized where the layer has no bias
  Matrix input;                 // gradient wrt the encoder input

  void add_scaled(const EncoderGrads& other, double scale);
};

EncoderGrads zero_grads(const Encoder& enc, Eigen::Index input_cols);

// Gradients of <upstream, forward(enc, x)> with respect to every parameter
// and to x. ReLU uses subgradient 0 at exactly-zero pre-activations.
EncoderGrads backward(const Encoder& enc, const Matrix& x, const Matrix& upstream);
EncoderGrads backward(const Encoder& enc, const ForwardTrace& trace, const Matrix& upstream);

}  // namespace mvcca
