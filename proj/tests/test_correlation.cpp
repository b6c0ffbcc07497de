#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mvcca/correlation.hpp"
#include "mvcca/linalg.hpp"
#include "test_util.hpp"

using namespace mvcca;
using namespace mvcca::test;

namespace {

Encoder linear_encoder(Matrix w) {
  Encoder enc;
  enc.kind = EncoderKind::linear;
  enc.layers.push_back(Layer{std::move(w), Vector()});
  return enc;
}

// Independent route: raw Eigen whitening (operatorInverseSqrt) + JacobiSVD,
// composed without touching the library's corr machinery.
double corr_brute(const Matrix& x1, const Matrix& x2, double ridge) {
  const double n = static_cast<double>(x1.cols());
  Matrix s11 = x1 * x1.transpose() / (n - 1.0);
  Matrix s22 = x2 * x2.transpose() / (n - 1.0);
  const Matrix s12 = x1 * x2.transpose() / (n - 1.0);
  s11.diagonal().array() += ridge;
  s22.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Matrix> e1(s11), e2(s22);
  const Matrix t = e1.operatorInverseSqrt() * s12 * e2.operatorInverseSqrt();
  return Eigen::JacobiSVD<Matrix>(t).singularValues().sum();
}

double corr_mpi_brute(const Matrix& x, const Matrix& a) {
  return std::sqrt((pinv(a) * a * pinv(x) * x).trace());
}

ViewBatch centered_randn(Eigen::Index d, Eigen::Index n, uint64_t seed) {
  return center_rows(randn(d, n, seed));
}

}  // namespace

TEST_CASE("center_rows subtracts exactly the row means") {
  Matrix x(2, 2);
  x << 1.0, 3.0, 2.0, 2.0;
  const ViewBatch v = center_rows(x);
  CHECK(v.centered);
  CHECK(v.data(0, 0) == doctest::Approx(-1.0));
  CHECK(v.data(0, 1) == doctest::Approx(1.0));
  CHECK(v.data(1, 0) == doctest::Approx(0.0));
  CHECK(v.data(1, 1) == doctest::Approx(0.0));

  const ViewBatch again = center_rows(v.data);
  CHECK(max_abs_diff(again.data, v.data) == 0.0);

  const ViewBatch r = centered_randn(3, 10, 1);
  CHECK(r.data.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(center_rows(Matrix::Ones(3, 1)), ContractViolation);
}

TEST_CASE("covariance closed forms and ridge") {
  Matrix x(1, 2);
  x << -1.0, 1.0;
  const ViewBatch v = ViewBatch::assume_centered(x);
  const Matrix c = covariance(v, v, 0.0);
  CHECK(c(0, 0) == doctest::Approx(2.0));

  const ViewBatch r = centered_randn(3, 20, 2);
  const Matrix plain = covariance(r, r, 0.0);
  const Matrix shifted = covariance(r, r, 0.5);
  CHECK(max_abs_diff(shifted, Matrix(0.5 * (plain + plain.transpose()) +
                                     0.5 * Matrix::Identity(3, 3))) < 1e-12);
}

TEST_CASE("self-covariance is PSD") {
  const ViewBatch r = centered_randn(4, 100, 3);
  const Matrix c = covariance(r, r, 0.0);
  const SymEig e = sym_eig(Matrix(0.5 * (c + c.transpose())));
  CHECK(e.values(3) >= -1e-10);
}

TEST_CASE("covariance rejects mismatched sample counts and uncentered input") {
  const ViewBatch a = centered_randn(2, 10, 4);
  const ViewBatch b = centered_randn(2, 12, 5);
  CHECK_THROWS_AS(covariance(a, b, 0.0), ContractViolation);
  ViewBatch raw{randn(2, 10, 6), false};
  CHECK_THROWS_AS(covariance(raw, a, 0.0), ContractViolation);
}

TEST_CASE("corr_pair of a view with itself equals its dimension") {
  const ViewBatch x = centered_randn(2, 100, 7);
  const CorrResult r = corr_pair(x, x, 0.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(r.singulars.sum()).epsilon(1e-9));
  for (Eigen::Index i = 0; i < r.singulars.size(); ++i) {
    CHECK(r.singulars(i) >= 0.0);
    CHECK(r.singulars(i) <= 1.0 + 1e-6);
  }
}

TEST_CASE("corr_pair is invariant under invertible per-view maps") {
  const ViewBatch x1 = centered_randn(3, 200, 8);
  const ViewBatch x2 = centered_randn(3, 200, 9);
  const Matrix q = rand_invertible(3, 50.0, 10);
  const ViewBatch qx = ViewBatch::assume_centered(q * x1.data);
  CHECK(corr_pair(qx, x2, 0.0).value ==
        doctest::Approx(corr_pair(x1, x2, 0.0).value).epsilon(1e-6));
  // mapping one view by Q leaves the self-pair value at full dimension
  CHECK(corr_pair(qx, x1, 0.0).value == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("corr_pair matches the brute-force whitening oracle") {
  const ViewBatch x1 = centered_randn(5, 2000, 11);
  const ViewBatch x2 = centered_randn(5, 2000, 12);
  for (double ridge : {0.0, 1e-3, 0.5}) {
    CHECK(corr_pair(x1, x2, ridge).value ==
          doctest::Approx(corr_brute(x1.data, x2.data, ridge)).epsilon(1e-8));
  }
}

TEST_CASE("corr_pair is symmetric in its arguments") {
  const ViewBatch x1 = centered_randn(4, 60, 13);
  const ViewBatch x2 = centered_randn(6, 60, 14);
  CHECK(corr_pair(x1, x2, 1e-3).value ==
        doctest::Approx(corr_pair(x2, x1, 1e-3).value).epsilon(1e-10));
}

TEST_CASE("corr_pair demands a ridge when the self-covariance is singular") {
  // rank-1 data in 2 rows
  Matrix x(2, 40);
  x.row(0) = randn(1, 40, 15);
  x.row(1) = 2.0 * x.row(0);
  const ViewBatch v = center_rows(x);
  const ViewBatch y = centered_randn(2, 40, 16);
  CHECK_THROWS_AS(corr_pair(v, y, 0.0), SingularityError);
  CHECK_NOTHROW(corr_pair(v, y, 1e-3));
  try {
    corr_pair(v, y, 0.0);
  } catch (const SingularityError& e) {
    CHECK(std::string(e.what()).find("ridge") != std::string::npos);
  }
}

TEST_CASE("corr_multi composes pairwise values") {
  const ViewBatch x1 = centered_randn(3, 80, 17);
  const ViewBatch x2 = centered_randn(4, 80, 18);
  const ViewBatch x3 = centered_randn(2, 80, 19);

  CHECK(corr_multi({x1, x2}, 1e-3) ==
        doctest::Approx(corr_pair(x1, x2, 1e-3).value).epsilon(1e-12));

  const double manual = corr_pair(x1, x2, 1e-3).value + corr_pair(x1, x3, 1e-3).value +
                        corr_pair(x2, x3, 1e-3).value;
  CHECK(corr_multi({x1, x2, x3}, 1e-3) == doctest::Approx(manual).epsilon(1e-12));

  // three identical full-rank copies: every pair is a self-correlation
  const double triple = corr_multi({x1, x1, x1}, 0.0);
  CHECK(triple == doctest::Approx(9.0).epsilon(1e-6));

  CHECK_THROWS_AS(corr_multi({x1}, 0.0), ContractViolation);
}

namespace {

double fd_rel_error(const ViewBatch& x1, const ViewBatch& x2, double ridge) {
  const PairGrad g = corr_pair_grad(x1, x2, ridge);
  const double step = 1e-5;
  Matrix fd1 = Matrix::Zero(x1.data.rows(), x1.data.cols());
  Matrix fd2 = Matrix::Zero(x2.data.rows(), x2.data.cols());
  for (Eigen::Index r = 0; r < x1.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < x1.data.cols(); ++c) {
      Matrix hi = x1.data, lo = x1.data;
      hi(r, c) += step;
      lo(r, c) -= step;
      fd1(r, c) = (corr_pair(ViewBatch::assume_centered(hi), x2, ridge).value -
                   corr_pair(ViewBatch::assume_centered(lo), x2, ridge).value) /
                  (2.0 * step);
    }
  }
  for (Eigen::Index r = 0; r < x2.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < x2.data.cols(); ++c) {
      Matrix hi = x2.data, lo = x2.data;
      hi(r, c) += step;
      lo(r, c) -= step;
      fd2(r, c) = (corr_pair(x1, ViewBatch::assume_centered(hi), ridge).value -
                   corr_pair(x1, ViewBatch::assume_centered(lo), ridge).value) /
                  (2.0 * step);
    }
  }
  const double max_fd = std::max(fd1.cwiseAbs().maxCoeff(), fd2.cwiseAbs().maxCoeff());
  const double denom = std::max(max_fd, 1e-10);
  const double err1 = (g.g1 - fd1).cwiseAbs().maxCoeff();
  const double err2 = (g.g2 - fd2).cwiseAbs().maxCoeff();
  return std::max(err1, err2) / denom;
}

}  // namespace

TEST_CASE("corr_pair_grad matches central finite differences") {
  const ViewBatch x1 = centered_randn(3, 40, 20);
  const ViewBatch x2 = centered_randn(3, 40, 21);
  CHECK(fd_rel_error(x1, x2, 0.0) < 1e-4);
  CHECK(fd_rel_error(x1, x2, 1e-3) < 1e-4);

  const ViewBatch w1 = centered_randn(2, 30, 22);
  const ViewBatch w2 = centered_randn(5, 30, 23);
  CHECK(fd_rel_error(w1, w2, 1e-3) < 1e-4);
}

TEST_CASE("self-correlation sits at a flat maximum") {
  const ViewBatch x = centered_randn(3, 50, 24);
  const PairGrad g = corr_pair_grad(x, x, 0.0);
  // value is pinned at d, so the total derivative vanishes
  CHECK((g.g1 + g.g2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("corr_pair is scale invariant along each view") {
  const ViewBatch x1 = centered_randn(3, 60, 25);
  const ViewBatch x2 = centered_randn(4, 60, 26);
  const ViewBatch scaled = ViewBatch::assume_centered(2.0 * x1.data);
  CHECK(corr_pair(scaled, x2, 0.0).value ==
        doctest::Approx(corr_pair(x1, x2, 0.0).value).epsilon(1e-9));
  // directional derivative along x1 itself is zero
  const PairGrad g = corr_pair_grad(x1, x2, 0.0);
  CHECK(std::abs((g.g1.array() * x1.data.array()).sum()) < 1e-6);
}

TEST_CASE("corr_mpi rank identities") {
  const ViewBatch x = centered_randn(4, 50, 27);
  CHECK(corr_mpi(x, x) == doctest::Approx(2.0).epsilon(1e-6));  // sqrt(4)

  const ViewBatch y = centered_randn(3, 50, 28);
  CHECK(corr_mpi(y, y) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("corr_mpi vanishes on orthogonal row spaces") {
  // x lives on the first 20 columns, a on the last 20; both centered within
  // their support, so the row spaces are orthogonal.
  Matrix x = Matrix::Zero(3, 40), a = Matrix::Zero(3, 40);
  x.leftCols(20) = center_rows(randn(3, 20, 29)).data;
  a.rightCols(20) = center_rows(randn(3, 20, 30)).data;
  const double v = corr_mpi(ViewBatch::assume_centered(x), ViewBatch::assume_centered(a));
  CHECK(v < 1e-8);
}

TEST_CASE("corr_mpi matches the direct pseudoinverse formula") {
  const ViewBatch x = centered_randn(3, 50, 31);
  const ViewBatch a = centered_randn(3, 50, 32);
  CHECK(corr_mpi(x, a) == doctest::Approx(corr_mpi_brute(x.data, a.data)).epsilon(1e-8));

  const ViewBatch deficient =
      ViewBatch::assume_centered(rand_rank(4, 2, 33) * center_rows(randn(4, 60, 34)).data);
  const ViewBatch b = centered_randn(4, 60, 35);
  CHECK(corr_mpi(deficient, b) ==
        doctest::Approx(corr_mpi_brute(deficient.data, b.data)).epsilon(1e-8));
}

TEST_CASE("CIP holds for well-conditioned invertible linear maps") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 9);
    const ViewBatch x = centered_randn(d, 20 * d, 600 + seed);
    const ViewBatch a = centered_randn(d, 20 * d, 700 + seed);
    const Matrix w = rand_invertible(d, 100.0, 800 + seed);
    const double eta = cip_violation(linear_encoder(w), x, a, 0.0);
    CHECK(eta < 1e-5);
  }
}

TEST_CASE("CIP converse: singular maps violate by at least the rank gap") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 6);
    const Eigen::Index rank = std::max<Eigen::Index>(1, d - 1);
    const ViewBatch x = centered_randn(d, 30 * d, 900 + seed);
    const Matrix w = rand_rank(d, rank, 1000 + seed);
    const double eta = cip_violation_mpi(linear_encoder(w), x, x);
    const double gap =
        std::abs(std::sqrt(static_cast<double>(numerical_rank(w * x.data))) -
                 std::sqrt(static_cast<double>(numerical_rank(x.data))));
    CHECK(eta >= gap - 1e-9);
    CHECK(eta > 0.05);
  }
}

TEST_CASE("rank-1 square maps break CIP visibly") {
  for (Eigen::Index d = 2; d <= 5; ++d) {
    const ViewBatch x = centered_randn(d, 40 * d, 1100 + static_cast<uint64_t>(d));
    const Matrix w = rand_rank(d, 1, 1200 + static_cast<uint64_t>(d));
    CHECK(cip_violation_mpi(linear_encoder(w), x, x) > 0.1);
  }
}

TEST_CASE("an untrained MLP encoder has a strictly positive violation") {
  const ViewBatch x = centered_randn(5, 100, 36);
  const ViewBatch a = centered_randn(5, 100, 37);
  const Encoder enc = init_encoder(EncoderKind::mlp, 5, {16}, 4, 38);
  const double eta = cip_violation(enc, x, a, 1e-3);
  CHECK(eta > 0.0);
  CHECK(std::isfinite(eta));
}
