#include "mvcca/correlation.hpp"

#include <cmath>

#include "mvcca/linalg.hpp"

namespace mvcca {

namespace {

void require_batch(const ViewBatch& v, const char* what) {
  require_nonempty(v.data, what);
  if (!v.centered) {
    throw ContractViolation(std::string(what) + " must be row-centered");
  }
  if (v.data.cols() < 2) {
    throw ContractViolation(std::string(what) + " needs at least two samples");
  }
}

void require_same_n(const ViewBatch& a, const ViewBatch& b) {
  if (a.data.cols() != b.data.cols()) {
    throw ContractViolation("view batches disagree on sample count: " +
                            std::to_string(a.data.cols()) + " vs " +
                            std::to_string(b.data.cols()));
  }
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Whitener (self-cov + ridge)^{-1/2}; rewraps the singularity error with the
// actionable hint.
Matrix whitener(const ViewBatch& x, double ridge, const char* which) {
  const Matrix s = symmetrize(covariance(x, x, 0.0));
  try {
    return inv_sqrt_psd(s, ridge);
  } catch (const SingularityError& e) {
    throw SingularityError(std::string("corr_pair: self-covariance of ") + which +
                           " is singular (" + e.what() +
                           "); pass a positive ridge");
  }
}

}  // namespace

ViewBatch center_rows(const Matrix& x) {
  require_nonempty(x, "center_rows input");
  require_finite(x, "center_rows input");
  if (x.cols() < 2) {
    throw ContractViolation("center_rows: need at least two columns to center");
  }
  Matrix out = x;
  out.colwise() -= Vector(x.rowwise().mean());
  return ViewBatch{std::move(out), true};
}

Matrix covariance(const ViewBatch& x, const ViewBatch& y, double ridge) {
  require_batch(x, "covariance x");
  require_batch(y, "covariance y");
  require_same_n(x, y);
  const double n = static_cast<double>(x.data.cols());
  Matrix c = (x.data * y.data.transpose()) / (n - 1.0);
  if (ridge != 0.0) {
    if (ridge < 0.0) throw ContractViolation("covariance: ridge must be non-negative");
    if (c.rows() != c.cols()) {
      throw ContractViolation("covariance: ridge applies only to self-covariance");
    }
    c = symmetrize(c);
    c.diagonal().array() += ridge;
  }
  return c;
}

CorrResult corr_pair(const ViewBatch& x1, const ViewBatch& x2, double ridge) {
  require_batch(x1, "corr_pair x1");
  require_batch(x2, "corr_pair x2");
  require_same_n(x1, x2);
  const Matrix k1 = whitener(x1, ridge, "x1");
  const Matrix k2 = whitener(x2, ridge, "x2");
  const Matrix t = k1 * covariance(x1, x2, 0.0) * k2;
  const Svd dec = svd(t);
  CorrResult out;
  out.singulars = dec.s;
  out.value = dec.s.sum();
  return out;
}

double corr_multi(const std::vector<ViewBatch>& views, double ridge) {
  if (views.size() < 2) {
    throw ContractViolation("corr_multi needs at least two views");
  }
  double total = 0.0;
  for (size_t k = 0; k < views.size(); ++k) {
    for (size_t j = k + 1; j < views.size(); ++j) {
      total += corr_pair(views[k], views[j], ridge).value;
    }
  }
  return total;
}

PairGrad corr_pair_grad(const ViewBatch& x1, const ViewBatch& x2, double ridge) {
  require_batch(x1, "corr_pair_grad x1");
  require_batch(x2, "corr_pair_grad x2");
  require_same_n(x1, x2);
  const double n = static_cast<double>(x1.data.cols());

  const Matrix k1 = whitener(x1, ridge, "x1");
  const Matrix k2 = whitener(x2, ridge, "x2");
  const Matrix s12 = covariance(x1, x2, 0.0);
  const Matrix t = k1 * s12 * k2;
  const Svd dec = svd(t);

  // Trace-norm derivative chained through the whitened cross-covariance,
  // standard deep CCA assembly.
  const Matrix d12 = k1 * dec.u * dec.vt * k2;
  const Matrix d11 =
      -0.5 * k1 * dec.u * dec.s.asDiagonal() * dec.u.transpose() * k1;
  const Matrix d22 =
      -0.5 * k2 * dec.vt.transpose() * dec.s.asDiagonal() * dec.vt * k2;

  PairGrad g;
  g.value = dec.s.sum();
  g.g1 = (2.0 * d11 * x1.data + d12 * x2.data) / (n - 1.0);
  g.g2 = (2.0 * d22 * x2.data + d12.transpose() * x1.data) / (n - 1.0);
  return g;
}

double corr_mpi(const ViewBatch& x, const ViewBatch& a) {
  require_batch(x, "corr_mpi x");
  require_batch(a, "corr_mpi a");
  require_same_n(x, a);

  // pinv(y) y = V V' for the rank-truncated right singular vectors, so
  // tr(pinv(a) a pinv(x) x) = ||Va' Vx||_F^2.
  const auto right_vectors = [](const Matrix& m) {
    const Svd dec = svd(m);
    const double cutoff = 1e-12 * dec.s(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < dec.s.size(); ++i) {
      if (dec.s(i) > cutoff) ++rank;
    }
    return Matrix(dec.vt.topRows(rank).transpose());
  };
  const Matrix vx = right_vectors(x.data);
  const Matrix va = right_vectors(a.data);
  const double trace = (va.transpose() * vx).squaredNorm();
  return std::sqrt(trace);
}

double cip_violation(const Encoder& enc, const ViewBatch& x, const ViewBatch& a,
                     double ridge) {
  require_batch(x, "cip_violation x");
  require_batch(a, "cip_violation a");
  require_same_n(x, a);
  const ViewBatch zx = center_rows(forward(enc, x.data));
  const ViewBatch za = center_rows(forward(enc, a.data));
  const double mapped = corr_pair(zx, za, ridge).value;
  const double raw = corr_pair(x, a, ridge).value;
  return std::abs(mapped - raw);
}

double cip_violation_mpi(const Encoder& enc, const ViewBatch& x, const ViewBatch& a) {
  require_batch(x, "cip_violation_mpi x");
  require_batch(a, "cip_violation_mpi a");
  require_same_n(x, a);
  const ViewBatch zx = center_rows(forward(enc, x.data));
  const ViewBatch za = center_rows(forward(enc, a.data));
  return std::abs(corr_mpi(zx, za) - corr_mpi(x, a));
}

}  // namespace mvcca
