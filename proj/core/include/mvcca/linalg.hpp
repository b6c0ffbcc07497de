#pragma once

#include "mvcca/matrix.hpp"

namespace mvcca {

// Thin SVD, m = u * s.asDiagonal() * vt, singular values descending.
struct Svd {
  Matrix u;
  Vector s;
  Matrix vt;
};

Svd svd(const Matrix& m);

// Eigendecomposition of a symmetric matrix, eigenvalues descending,
// eigenvectors in the columns of `vectors`.
struct SymEig {
  Vector values;
  Matrix vectors;
};

SymEig sym_eig(const Matrix& m);

// Moore-Penrose pseudoinverse. Singular values below tol * s_max are
// treated as zero.
Matrix pinv(const Matrix& m, double tol = 1e-12);

// (m + ridge*I)^{-1/2} of a symmetric PSD matrix via eigendecomposition.
// Throws SingularityError if the shifted spectrum dips to <= 1e-12.
Matrix inv_sqrt_psd(const Matrix& m, double ridge);

// Minimizer R* of ||R*b - c||_F over all linear maps R, closed form
// R* = c b' (b b')^+. Rank-deficient b is handled through the
// pseudoinverse (minimum-norm solution).
Matrix least_squares(const Matrix& b, const Matrix& c);

// Number of singular values above tol * s_max.
int numerical_rank(const Matrix& m, double tol = 1e-12);

}  // namespace mvcca
