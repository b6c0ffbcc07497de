#include "mvcca/noise.hpp"

#include <cmath>
#include <random>

#include "mvcca/linalg.hpp"

namespace mvcca {

namespace {

Matrix draw(const NoiseSpec& spec, std::mt19937_64& rng) {
  Matrix m(spec.rows, spec.cols);
  if (spec.dist == NoiseDist::gaussian) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) m(r, c) = dist(rng);
    }
  } else {
    const double bound = std::sqrt(3.0);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) m(r, c) = dist(rng);
    }
  }
  return m;
}

}  // namespace

Matrix sample(const NoiseSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw ContractViolation("noise sample: shape must be positive");
  }
  std::mt19937_64 rng(spec.seed);
  const int full = std::min(spec.rows, spec.cols);
  Matrix m = draw(spec, rng);
  if (numerical_rank(m) == full) return m;
  m = draw(spec, rng);
  if (numerical_rank(m) == full) return m;
  throw NumericFailure("noise sample: repeated rank-deficient draws for shape " +
                       shape_str(m));
}

}  // namespace mvcca
