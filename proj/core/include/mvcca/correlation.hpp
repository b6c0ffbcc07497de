#pragma once

#include <vector>

#include "mvcca/encoder.hpp"
#include "mvcca/matrix.hpp"

namespace mvcca {

// A data matrix (features x samples) whose rows are known to be zero-mean.
struct ViewBatch {
  Matrix data;
  bool centered = false;

  // Wraps a matrix the caller guarantees to be row-centered (used by
  // gradient code and finite-difference probes that perturb entries).
  static ViewBatch assume_centered(Matrix m) { return ViewBatch{std::move(m), true}; }
};

// Subtracts the per-row mean; the only change made to the data.
ViewBatch center_rows(const Matrix& x);

// (1/(n-1)) x y'. A non-zero ridge is legal only for self-covariance
// (square output); it symmetrizes the product and shifts the diagonal.
Matrix covariance(const ViewBatch& x, const ViewBatch& y, double ridge);

struct CorrResult {
  double value = 0.0;  // sum of canonical correlations
  Vector singulars;    // canonical correlations, descending
};

// Sum of singular values of T = S11^{-1/2} S12 S22^{-1/2}.
CorrResult corr_pair(const ViewBatch& x1, const ViewBatch& x2, double ridge);

// Pairwise sum over all K views.
double corr_multi(const std::vector<ViewBatch>& views, double ridge);

struct PairGrad {
  double value = 0.0;  // corr_pair value at the evaluation point
  Matrix g1;
  Matrix g2;
};

// d corr_pair / d x_i. When singular values of T coincide the SVD-based
// expression is still used (any subgradient is valid for ascent).
PairGrad corr_pair_grad(const ViewBatch& x1, const ViewBatch& x2, double ridge);

// Pseudoinverse-based diagnostic form: sqrt(tr(pinv(a) a pinv(x) x)).
// Ridge-free and defined for rank-deficient data.
double corr_mpi(const ViewBatch& x, const ViewBatch& a);

// |corr_pair(enc(x), enc(a)) - corr_pair(x, a)|, encoder outputs re-centered
// before correlating. Same ridge on both evaluations.
double cip_violation(const Encoder& enc, const ViewBatch& x, const ViewBatch& a, double ridge);

// Same violation measured with corr_mpi; usable when the encoded covariance
// is singular (rank-deficient linear maps).
double cip_violation_mpi(const Encoder& enc, const ViewBatch& x, const ViewBatch& a);

}  // namespace mvcca
