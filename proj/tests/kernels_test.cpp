#include <gtest/gtest.h>

#include "hprlp/kernels.hpp"
#include "hprlp/sparse.hpp"
#include "support.hpp"

namespace hprlp {
namespace {

using testing::Rng;

TEST(Kernels, ParallelMatchesSerialAcrossSizes) {
  Rng rng(11);
  for (std::size_t n : {0u, 1u, 7u, 2048u, 8191u, 8192u, 50000u}) {
    const Vector a = rng.vector(n, -1, 1), b = rng.vector(n, -1, 1);
    EXPECT_NEAR(kernels::dot(a, b), kernels::serial::dot(a, b), 1e-12 * (1.0 + n));
    EXPECT_NEAR(kernels::norm2(a), kernels::serial::norm2(a), 1e-12 * (1.0 + n));

    Vector y1 = b, y2 = b;
    kernels::axpby(0.3, a, -1.7, y1);
    kernels::serial::axpby(0.3, a, -1.7, y2);
    EXPECT_EQ(y1, y2);

    Vector lo(n, -0.5), hi(n, 0.25), o1(n), o2(n);
    if (n > 0) { lo[0] = -kInf; hi[n - 1] = kInf; }
    kernels::project_box(a, lo, hi, o1);
    kernels::serial::project_box(a, lo, hi, o2);
    EXPECT_EQ(o1, o2);
  }
}

TEST(Kernels, CompressedMatvecMatchesSerialBitwise) {
  Rng rng(12);
  const SparseMatrix a = testing::random_matrix(rng, 20000, 300, 0.02);
  const Vector x = rng.vector(300, -1, 1);
  Vector o1(20000), o2(20000);
  kernels::compressed_matvec(a.row_ptr(), a.col_idx(), a.csr_values(), x, o1);
  kernels::serial::compressed_matvec(a.row_ptr(), a.col_idx(), a.csr_values(), x, o2);
  EXPECT_EQ(o1, o2);
}

TEST(Kernels, ReductionsAreRepeatable) {
  Rng rng(13);
  const Vector a = rng.vector(100000, -1, 1), b = rng.vector(100000, -1, 1);
  const double d = kernels::dot(a, b);
  for (int rep = 0; rep < 5; ++rep) EXPECT_EQ(kernels::dot(a, b), d);
}

TEST(Kernels, Norm2HandlesExtremeScales) {
  const Vector big(4, 1e200), small(4, 1e-200);
  EXPECT_DOUBLE_EQ(kernels::norm2(big), 2e200);
  EXPECT_DOUBLE_EQ(kernels::norm2(small), 2e-200);
  EXPECT_EQ(kernels::norm2(Vector{}), 0.0);
}

TEST(Kernels, ThreadCountIsPositive) { EXPECT_GE(kernels::max_threads(), 1); }

}  // namespace
}  // namespace hprlp
