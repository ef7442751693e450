#ifndef HPRLP_KERNELS_HPP
#define HPRLP_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <span>

namespace hprlp::kernels {

// Below this many entries the parallel kernels run on the calling thread.
inline constexpr std::size_t kParallelMinSize = 8192;

// Partial sums in dot/norm2 are taken over fixed blocks and combined in block
// order, so results do not depend on the thread count.
inline constexpr std::size_t kReductionBlock = 2048;

/// out[i] = sum_{p in [ptr[i], ptr[i+1])} val[p] * x[idx[p]].
/// With CSR arrays this is A*x; with CSC arrays it is A^T*x.
void compressed_matvec(std::span<const std::int64_t> ptr,
                       std::span<const std::int32_t> idx,
                       std::span<const double> val, std::span<const double> x,
                       std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

// y <- alpha * x + beta * y
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);

// out <- min(max(v, lo), hi); infinite bounds pass through.
void project_box(std::span<const double> v, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> out);

// Single-threaded reference versions. Plain left-to-right loops; the parallel
// kernels are checked against these.
namespace serial {

void compressed_matvec(std::span<const std::int64_t> ptr,
                       std::span<const std::int32_t> idx,
                       std::span<const double> val, std::span<const double> x,
                       std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);
void project_box(std::span<const double> v, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> out);

}  // namespace serial

/// Number of threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_num_threads(int n);

}  // namespace hprlp::kernels

#endif  // HPRLP_KERNELS_HPP
