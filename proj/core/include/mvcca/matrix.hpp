#pragma once

#include <Eigen/Dense>
#include <string>

#include "mvcca/error.hpp"

namespace mvcca {

// Dense real matrix, the universal numeric carrier of the toolkit.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline bool is_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) {
    throw NonFiniteError(what + " contains non-finite entries");
  }
}

inline void require_nonempty(const Matrix& m, const std::string& what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ContractViolation(what + " must have at least one row and column");
  }
}

// Columns of `m` selected by `idx`, in order.
inline Matrix select_columns(const Matrix& m, const std::vector<int>& idx) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = m.col(idx[static_cast<size_t>(j)]);
  }
  return out;
}

inline std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace mvcca
