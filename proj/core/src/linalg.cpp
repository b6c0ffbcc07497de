#include "mvcca/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mvcca {

Svd svd(const Matrix& m) {
  require_nonempty(m, "svd input");
  require_finite(m, "svd input");
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericFailure("svd did not converge on a " + shape_str(m) + " matrix");
  }
  return Svd{dec.matrixU(), dec.singularValues(), dec.matrixV().transpose()};
}

SymEig sym_eig(const Matrix& m) {
  require_nonempty(m, "sym_eig input");
  require_finite(m, "sym_eig input");
  if (m.rows() != m.cols()) {
    throw ContractViolation("sym_eig input must be square, got " + shape_str(m));
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw ContractViolation("sym_eig input is not symmetric (max asymmetry " +
                            std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> dec(m);
  if (dec.info() != Eigen::Success) {
    throw NumericFailure("sym_eig did not converge on a " + shape_str(m) + " matrix");
  }
  // Eigen returns ascending order; flip to descending.
  const Eigen::Index n = m.rows();
  SymEig out;
  out.values = dec.eigenvalues().reverse();
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.vectors.col(i) = dec.eigenvectors().col(n - 1 - i);
  }
  return out;
}

Matrix pinv(const Matrix& m, double tol) {
  if (tol <= 0.0 || tol >= 1.0) {
    throw ContractViolation("pinv tolerance must lie in (0, 1)");
  }
  const Svd dec = svd(m);
  const double cutoff = tol * dec.s(0);
  Vector inv = Vector::Zero(dec.s.size());
  for (Eigen::Index i = 0; i < dec.s.size(); ++i) {
    if (dec.s(i) > cutoff) inv(i) = 1.0 / dec.s(i);
  }
  return dec.vt.transpose() * inv.asDiagonal() * dec.u.transpose();
}

Matrix inv_sqrt_psd(const Matrix& m, double ridge) {
  if (ridge < 0.0) {
    throw ContractViolation("inv_sqrt_psd ridge must be non-negative");
  }
  const SymEig dec = sym_eig(m);
  const Eigen::Index n = m.rows();
  Vector shifted = dec.values.array() + ridge;
  const double smallest = shifted(n - 1);
  if (smallest <= 1e-12) {
    throw SingularityError("inv_sqrt_psd: eigenvalue " + std::to_string(smallest) +
                           " after ridge shift " + std::to_string(ridge) +
                           " is not safely positive");
  }
  const Vector inv_sqrt = shifted.array().rsqrt();
  Matrix out = dec.vectors * inv_sqrt.asDiagonal() * dec.vectors.transpose();
  // Exact symmetry keeps downstream sym_eig contracts happy.
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

Matrix least_squares(const Matrix& b, const Matrix& c) {
  if (b.cols() != c.cols()) {
    throw ContractViolation("least_squares: b has " + std::to_string(b.cols()) +
                            " columns, c has " + std::to_string(c.cols()));
  }
  const Matrix gram = b * b.transpose();
  return c * b.transpose() * pinv(gram);
}

int numerical_rank(const Matrix& m, double tol) {
  const Svd dec = svd(m);
  const double cutoff = tol * dec.s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < dec.s.size(); ++i) {
    if (dec.s(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace mvcca
