#include <gtest/gtest.h>

#include "hprlp/sparse.hpp"
#include "support.hpp"

namespace hprlp {
namespace {

using testing::Rng;

const SparseMatrix kUpper = SparseMatrix::from_dense(2, 2, Vector{1, 2, 0, 3});

TEST(Spmv, Identity) {
  EXPECT_EQ(spmv(SparseMatrix::identity(2), Vector{3, 4}), (Vector{3, 4}));
  EXPECT_EQ(spmv_t(SparseMatrix::identity(2), Vector{3, 4}), (Vector{3, 4}));
}

TEST(Spmv, HandComputedProducts) {
  EXPECT_EQ(spmv(kUpper, Vector{1, 1}), (Vector{3, 3}));
  EXPECT_EQ(spmv_t(kUpper, Vector{1, 1}), (Vector{1, 5}));
}

TEST(Spmv, ZeroRowAndZeroInput) {
  const SparseMatrix a = SparseMatrix::from_dense(2, 2, Vector{1, 1, 0, 0});
  EXPECT_EQ(spmv(a, Vector{5, -2})[1], 0.0);
  EXPECT_EQ(spmv_t(kUpper, Vector{0, 0}), (Vector{0, 0}));
}

TEST(Spmv, DimensionMismatchThrows) {
  EXPECT_THROW(spmv(kUpper, Vector{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(spmv_t(kUpper, Vector{1}), std::invalid_argument);
}

TEST(SparseMatrix, DuplicatesSummedZerosDropped) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 0, 2.0}, {1, 1, 4.0}, {1, 1, -4.0}, {1, 0, 0.0}};
  const SparseMatrix a(2, 2, t);
  ASSERT_EQ(a.nnz(), 1u);
  EXPECT_EQ(a.triplets()[0].value, 3.0);
}

TEST(SparseMatrix, RejectsBadEntries) {
  const std::vector<Triplet> out_of_range{{2, 0, 1.0}};
  EXPECT_THROW(SparseMatrix(2, 2, out_of_range), std::invalid_argument);
  const std::vector<Triplet> nonfinite{{0, 0, kInf}};
  EXPECT_THROW(SparseMatrix(2, 2, nonfinite), std::invalid_argument);
}

TEST(SparseMatrix, CsrMirrorAgreesWithCsc) {
  Rng rng(3);
  const SparseMatrix a = testing::random_matrix(rng, 17, 23, 0.3);
  std::vector<std::tuple<int, int, double>> from_csr, from_csc;
  for (const auto& t : a.triplets()) from_csc.emplace_back(t.row, t.col, t.value);
  for (int i = 0; i < a.rows(); ++i)
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      from_csr.emplace_back(i, a.col_idx()[k], a.csr_values()[k]);
  std::sort(from_csr.begin(), from_csr.end());
  std::sort(from_csc.begin(), from_csc.end());
  EXPECT_EQ(from_csr, from_csc);
}

TEST(SparseMatrix, ScaledMatchesDiagonalProducts) {
  const SparseMatrix s = kUpper.scaled(Vector{2, 3}, Vector{5, 7});
  EXPECT_EQ(s, SparseMatrix::from_dense(2, 2, Vector{10, 28, 0, 63}));
}

TEST(SparseProperty, AdjointIdentity) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = rng.integer(1, 40), n = rng.integer(1, 40);
    const SparseMatrix a = testing::random_matrix(rng, m, n, 0.3);
    const Vector x = rng.vector(static_cast<std::size_t>(n), -1, 1);
    const Vector y = rng.vector(static_cast<std::size_t>(m), -1, 1);
    double lhs = 0.0, rhs = 0.0;
    const Vector ax = spmv(a, x), aty = spmv_t(a, y);
    for (int i = 0; i < m; ++i) lhs += ax[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) rhs += x[static_cast<std::size_t>(j)] * aty[static_cast<std::size_t>(j)];
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
}

TEST(LambdaEstimate, HandExamples) {
  PowerIterationOptions exact;
  exact.safety = 1.0;
  EXPECT_NEAR(estimate_lambda_a(SparseMatrix::from_dense(1, 1, Vector{3}), exact), 9.0, 9.0 * 1e-4);
  EXPECT_NEAR(estimate_lambda_a(SparseMatrix::identity(2), exact), 1.0, 1e-4);
  EXPECT_NEAR(estimate_lambda_a(SparseMatrix::from_dense(2, 2, Vector{1, 0, 0, 2})), 4.2, 4.2 * 1e-4);
}

TEST(LambdaEstimate, EmptyMatrixThrows) {
  EXPECT_THROW(estimate_lambda_a(SparseMatrix(3, 3, std::vector<Triplet>{})), std::invalid_argument);
}

TEST(LambdaEstimate, IsDeterministic) {
  Rng rng(5);
  const SparseMatrix a = testing::random_matrix(rng, 30, 20, 0.3);
  EXPECT_EQ(estimate_lambda_a(a), estimate_lambda_a(a));
}

TEST(SparseProperty, RayleighQuotientBound) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = rng.integer(1, 30), n = rng.integer(1, 30);
    const SparseMatrix a = testing::random_matrix(rng, m, n, 0.4);
    const double lambda = estimate_lambda_a(a);
    for (int s = 0; s < 100; ++s) {
      Vector x = rng.vector(static_cast<std::size_t>(n), -1, 1);
      const double nx = testing::norm(x);
      for (auto& e : x) e /= nx;
      const double q = testing::norm(spmv(a, x));
      EXPECT_GE(lambda, q * q);
    }
  }
}

}  // namespace
}  // namespace hprlp
