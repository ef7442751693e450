#include "hprlp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "parallel_for.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hprlp::kernels {

namespace {

using Index = std::int64_t;

double block_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Combines per-block partials in block order.
template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn&& fn) {
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (nblocks <= 1) return n == 0 ? 0.0 : fn(0, n);
  std::vector<double> partial(nblocks);
  const Index nb = static_cast<Index>(nblocks);
  detail::parallel_for(nb, n >= kParallelMinSize, [&](Index b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    partial[static_cast<std::size_t>(b)] = fn(lo, hi - lo);
  });
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

void compressed_matvec(std::span<const std::int64_t> ptr,
                       std::span<const std::int32_t> idx,
                       std::span<const double> val, std::span<const double> x,
                       std::span<double> out) {
  const Index rows = static_cast<Index>(out.size());
  const bool par = val.size() + out.size() >= kParallelMinSize;
  detail::parallel_for(rows, par, [&](Index i) {
    double s = 0.0;
    for (Index p = ptr[i]; p < ptr[i + 1]; ++p) s += val[p] * x[idx[p]];
    out[i] = s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t len) {
    return block_dot(a.data() + lo, b.data() + lo, len);
  });
}

double norm2(std::span<const double> a) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  // Only rescale when squaring would leave the normal range.
  if (scale < 1e-150 || scale > 1e150) {
    const double inv = 1.0 / scale;
    const double s = blocked_sum(a.size(), [&](std::size_t lo, std::size_t len) {
      double acc = 0.0;
      for (std::size_t i = lo; i < lo + len; ++i) {
        const double t = a[i] * inv;
        acc += t * t;
      }
      return acc;
    });
    return scale * std::sqrt(s);
  }
  return std::sqrt(dot(a, a));
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  const Index n = static_cast<Index>(y.size());
  detail::parallel_for(n, y.size() >= kParallelMinSize,
                       [&](Index i) { y[i] = alpha * x[i] + beta * y[i]; });
}

void project_box(std::span<const double> v, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> out) {
  const Index n = static_cast<Index>(v.size());
  detail::parallel_for(n, v.size() >= kParallelMinSize,
                       [&](Index i) { out[i] = std::min(std::max(v[i], lo[i]), hi[i]); });
}

namespace serial {

void compressed_matvec(std::span<const std::int64_t> ptr,
                       std::span<const std::int32_t> idx,
                       std::span<const double> val, std::span<const double> x,
                       std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (auto p = ptr[i]; p < ptr[i + 1]; ++p)
      s += val[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(idx[p])];
    out[i] = s;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = alpha * x[i] + beta * y[i];
}

void project_box(std::span<const double> v, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::min(std::max(v[i], lo[i]), hi[i]);
}

}  // namespace serial

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace hprlp::kernels
