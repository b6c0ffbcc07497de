#include "mvcca/encoder.hpp"

#include <cmath>
#include <random>

namespace mvcca {

bool Encoder::parameters_finite() const {
  for (const Layer& l : layers) {
    if (!l.weight.allFinite()) return false;
    if (l.has_bias() && !l.bias.allFinite()) return false;
  }
  return true;
}

Encoder init_encoder(EncoderKind kind, int input_dim, const std::vector<int>& hidden_dims,
                     int output_dim, uint64_t seed) {
  if (input_dim < 1 || output_dim < 1) {
    throw ContractViolation("init_encoder: dimensions must be positive");
  }
  for (int h : hidden_dims) {
    if (h < 1) throw ContractViolation("init_encoder: hidden dimensions must be positive");
  }
  if (kind == EncoderKind::linear && !hidden_dims.empty()) {
    throw ContractViolation("init_encoder: linear encoders have no hidden layers");
  }

  std::mt19937_64 rng(seed);
  Encoder enc;
  enc.kind = kind;

  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  dims.push_back(output_dim);

  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    const int in = dims[i];
    const int out = dims[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Layer layer;
    layer.weight.resize(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) {
        layer.weight(r, c) = dist(rng);
      }
    }
    if (kind == EncoderKind::mlp) {
      layer.bias = Vector::Zero(out);
    }
    enc.layers.push_back(std::move(layer));
  }
  return enc;
}

Encoder identity_encoder(int d) {
  if (d < 1) throw ContractViolation("identity_encoder: dimension must be positive");
  Encoder enc;
  enc.kind = EncoderKind::linear;
  Layer layer;
  layer.weight = Matrix::Identity(d, d);
  enc.layers.push_back(std::move(layer));
  return enc;
}

Matrix forward(const Encoder& enc, const Matrix& x) {
  ForwardTrace trace;
  return forward(enc, x, trace);
}

Matrix forward(const Encoder& enc, const Matrix& x, ForwardTrace& trace) {
  if (x.rows() != enc.input_dim()) {
    throw ContractViolation("forward: input has " + std::to_string(x.rows()) +
                            " rows, encoder expects " + std::to_string(enc.input_dim()));
  }
  trace.activations.clear();
  trace.activations.reserve(enc.layers.size() + 1);
  trace.activations.push_back(x);
  for (size_t i = 0; i < enc.layers.size(); ++i) {
    const Layer& l = enc.layers[i];
    Matrix pre = l.weight * trace.activations.back();
    if (l.has_bias()) pre.colwise() += l.bias;
    if (i + 1 < enc.layers.size()) {
      trace.activations.push_back(pre.cwiseMax(0.0));
    } else {
      trace.activations.push_back(std::move(pre));
    }
  }
  return trace.activations.back();
}

void EncoderGrads::add_scaled(const EncoderGrads& other, double scale) {
  for (size_t i = 0; i < weights.size(); ++i) {
    weights[i] += scale * other.weights[i];
    if (biases[i].size() > 0) biases[i] += scale * other.biases[i];
  }
  if (input.size() > 0 && other.input.size() > 0) input += scale * other.input;
}

EncoderGrads zero_grads(const Encoder& enc, Eigen::Index input_cols) {
  EncoderGrads g;
  for (const Layer& l : enc.layers) {
    g.weights.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
    g.biases.push_back(l.has_bias() ? Vector::Zero(l.bias.size()) : Vector());
  }
  g.input = Matrix::Zero(enc.input_dim(), input_cols);
  return g;
}

EncoderGrads backward(const Encoder& enc, const Matrix& x, const Matrix& upstream) {
  ForwardTrace trace;
  forward(enc, x, trace);
  return backward(enc, trace, upstream);
}

EncoderGrads backward(const Encoder& enc, const ForwardTrace& trace, const Matrix& upstream) {
  const Matrix& out = trace.activations.back();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols()) {
    throw ContractViolation("backward: upstream shape " + shape_str(upstream) +
                            " does not match encoder output " + shape_str(out));
  }
  EncoderGrads g;
  g.weights.resize(enc.layers.size());
  g.biases.resize(enc.layers.size());

  Matrix delta = upstream;
  for (size_t i = enc.layers.size(); i-- > 0;) {
    const Layer& l = enc.layers[i];
    const Matrix& in_act = trace.activations[i];
    g.weights[i] = delta * in_act.transpose();
    g.biases[i] = l.has_bias() ? Vector(delta.rowwise().sum()) : Vector();
    Matrix down = l.weight.transpose() * delta;
    if (i > 0) {
      // in_act is post-ReLU, so in_act > 0 iff the pre-activation was > 0;
      // exact zeros get subgradient 0.
      delta = down.cwiseProduct((in_act.array() > 0.0).cast<double>().matrix());
    } else {
      g.input = std::move(down);
    }
  }
  return g;
}

}  // namespace mvcca
