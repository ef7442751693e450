#include "hprlp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "hprlp/kernels.hpp"

namespace hprlp {

SparseMatrix::SparseMatrix(int rows, int cols, std::span<const Triplet> entries)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("SparseMatrix: negative dimension");
  std::vector<Triplet> sorted(entries.begin(), entries.end());
  for (const auto& t : sorted) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(t.row) +
                                  "," + std::to_string(t.col) + ") out of range");
    if (!std::isfinite(t.value))
      throw std::invalid_argument("SparseMatrix: non-finite entry");
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });

  csc_ptr_.assign(static_cast<std::size_t>(cols) + 1, 0);
  csc_idx_.reserve(sorted.size());
  csc_val_.reserve(sorted.size());
  std::size_t i = 0;
  for (int j = 0; j < cols; ++j) {
    while (i < sorted.size() && sorted[i].col == j) {
      const int r = sorted[i].row;
      double v = 0.0;
      while (i < sorted.size() && sorted[i].col == j && sorted[i].row == r)
        v += sorted[i++].value;
      if (v != 0.0) {
        csc_idx_.push_back(r);
        csc_val_.push_back(v);
      }
    }
    csc_ptr_[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(csc_val_.size());
  }
  build_row_mirror();
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix(n, n, t);
}

SparseMatrix SparseMatrix::from_dense(int rows, int cols,
                                      std::span<const double> row_major) {
  if (row_major.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw std::invalid_argument("SparseMatrix::from_dense: size mismatch");
  std::vector<Triplet> t;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double v = row_major[static_cast<std::size_t>(r) * cols + c];
      if (v != 0.0) t.push_back({r, c, v});
    }
  return SparseMatrix(rows, cols, t);
}

void SparseMatrix::build_row_mirror() {
  csr_ptr_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  for (auto r : csc_idx_) ++csr_ptr_[static_cast<std::size_t>(r) + 1];
  std::partial_sum(csr_ptr_.begin(), csr_ptr_.end(), csr_ptr_.begin());
  csr_idx_.resize(csc_idx_.size());
  csr_val_.resize(csc_val_.size());
  std::vector<std::int64_t> next(csr_ptr_.begin(), csr_ptr_.end() - 1);
  for (int j = 0; j < cols_; ++j) {
    for (auto p = csc_ptr_[j]; p < csc_ptr_[j + 1]; ++p) {
      const auto r = static_cast<std::size_t>(csc_idx_[p]);
      const auto q = static_cast<std::size_t>(next[r]++);
      csr_idx_[q] = j;
      csr_val_[q] = csc_val_[p];
    }
  }
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (int j = 0; j < cols_; ++j)
    for (auto p = csc_ptr_[j]; p < csc_ptr_[j + 1]; ++p)
      out.push_back({csc_idx_[p], j, csc_val_[p]});
  return out;
}

SparseMatrix SparseMatrix::scaled(std::span<const double> row_scale,
                                  std::span<const double> col_scale) const {
  if (row_scale.size() != static_cast<std::size_t>(rows_) ||
      col_scale.size() != static_cast<std::size_t>(cols_))
    throw std::invalid_argument("SparseMatrix::scaled: dimension mismatch");
  SparseMatrix out = *this;
  for (int j = 0; j < cols_; ++j)
    for (auto p = csc_ptr_[j]; p < csc_ptr_[j + 1]; ++p)
      out.csc_val_[p] = csc_val_[p] * row_scale[csc_idx_[p]] * col_scale[j];
  out.build_row_mirror();
  return out;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> out) {
  if (x.size() != static_cast<std::size_t>(a.cols()) ||
      out.size() != static_cast<std::size_t>(a.rows()))
    throw std::invalid_argument("spmv: dimension mismatch");
  kernels::compressed_matvec(a.row_ptr(), a.col_idx(), a.csr_values(), x, out);
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector out(static_cast<std::size_t>(a.rows()));
  spmv(a, x, out);
  return out;
}

void spmv_t(const SparseMatrix& a, std::span<const double> y, std::span<double> out) {
  if (y.size() != static_cast<std::size_t>(a.rows()) ||
      out.size() != static_cast<std::size_t>(a.cols()))
    throw std::invalid_argument("spmv_t: dimension mismatch");
  kernels::compressed_matvec(a.col_ptr(), a.row_idx(), a.csc_values(), y, out);
}

Vector spmv_t(const SparseMatrix& a, std::span<const double> y) {
  Vector out(static_cast<std::size_t>(a.cols()));
  spmv_t(a, y, out);
  return out;
}

double estimate_lambda_a(const SparseMatrix& a, const PowerIterationOptions& opts) {
  if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("estimate_lambda_a: rel_tol must be > 0");
  if (!(opts.safety >= 1.0)) throw std::invalid_argument("estimate_lambda_a: safety must be >= 1");
  if (a.nnz() == 0) throw std::invalid_argument("estimate_lambda_a: A has no nonzero entries");

  const auto m = static_cast<std::size_t>(a.rows());
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Vector v(m), atv(static_cast<std::size_t>(a.cols())), aatv(m);
  for (auto& e : v) e = unif(rng);
  kernels::axpby(0.0, v, 1.0 / kernels::norm2(v), v);

  double lambda = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    spmv_t(a, v, atv);
    const double rayleigh = kernels::dot(atv, atv);  // v^T A A^T v, ||v|| = 1
    spmv(a, atv, aatv);
    const double nrm = kernels::norm2(aatv);
    if (nrm == 0.0) break;  // start vector in the null space of A^T
    const double prev = lambda;
    lambda = std::max(lambda, rayleigh);
    for (std::size_t i = 0; i < m; ++i) v[i] = aatv[i] / nrm;
    if (it > 0 && std::abs(lambda - prev) <= opts.rel_tol * lambda) break;
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("estimate_lambda_a: degenerate matrix");
  return opts.safety * lambda;
}

}  // namespace hprlp
