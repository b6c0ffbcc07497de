#pragma once

#include <cstdint>

#include "mvcca/matrix.hpp"

namespace mvcca {

// Both distributions are zero-mean unit-variance so they are exchangeable in
// the regularizer without retuning alpha; uniform spans +-sqrt(3).
enum class NoiseDist { gaussian, uniform };

struct NoiseSpec {
  NoiseDist dist = NoiseDist::gaussian;
  int rows = 0;
  int cols = 0;
  uint64_t seed = 0;
};

// I.i.d. draw, deterministic per seed. Guarantees numerical rank
// min(rows, cols): resamples once on a (measure-zero) deficient draw, then
// throws NumericFailure.
Matrix sample(const NoiseSpec& spec);

}  // namespace mvcca
