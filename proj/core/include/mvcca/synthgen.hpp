#pragma once

#include <cstdint>
#include <utility>

#include "mvcca/dataset.hpp"
#include "mvcca/encoder.hpp"
#include "mvcca/matrix.hpp"

namespace mvcca {

// The latent ground-truth matrix all views and tasks derive from.
struct GodEmbedding {
  Matrix g;  // d x n, i.i.d. standard normal
};

// Requires n > d so downstream full-rank assumptions hold.
GodEmbedding generate_god(int d, int n, uint64_t seed);

struct SliceRange {
  int begin = 0;
  int end = 0;  // exclusive
  int length() const { return end - begin; }
};

// Feature windows of the two views for a given common rate: the windows
// jointly cover [0, d) and share exactly common_rate percent of it.
std::pair<SliceRange, SliceRange> slice_views(int d, int common_rate);

// Adds noise_scale * N(0,1) to the slice, then applies a frozen random
// one-hidden-layer ReLU MLP of width `hidden` whose weights are scaled by
// `gain` (larger gain = harder, more nonlinear views); output dim equals
// input dim.
Matrix apply_view_transform(const Matrix& g_slice, double noise_scale, int hidden,
                            double gain, uint64_t seed);

// Test hook: same pipeline with a caller-supplied transform.
Matrix apply_view_transform_with(const Encoder& transform, const Matrix& g_slice,
                                 double noise_scale, uint64_t noise_seed);

// task_count rows, each w_j' * g for a standard-normal weight vector.
Matrix generate_tasks(const Matrix& g, int task_count, uint64_t seed);

// Test hook: tasks from explicit weights (task_count x d).
Matrix generate_tasks_with(const Matrix& weights, const Matrix& g);

// Full pipeline: god embedding -> view slices -> per-view transform ->
// tasks; leading half of columns is the train split.
MultiViewDataset build_dataset(const SynthConfig& cfg);

}  // namespace mvcca
