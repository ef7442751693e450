#ifndef HPRLP_SPARSE_HPP
#define HPRLP_SPARSE_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace hprlp {

using Vector = std::vector<double>;

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed-column sparse matrix with a compressed-row mirror so that both
/// A*x and A^T*y run as row-wise gathers.
///
/// Duplicate (row, col) entries are summed at construction and entries that
/// sum to exactly zero are dropped. Within each column row indices are
/// strictly increasing.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::span<const Triplet> entries);

  static SparseMatrix identity(int n);
  static SparseMatrix from_dense(int rows, int cols,
                                 std::span<const double> row_major);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return csc_val_.size(); }

  std::span<const std::int64_t> col_ptr() const { return csc_ptr_; }
  std::span<const std::int32_t> row_idx() const { return csc_idx_; }
  std::span<const double> csc_values() const { return csc_val_; }
  std::span<const std::int64_t> row_ptr() const { return csr_ptr_; }
  std::span<const std::int32_t> col_idx() const { return csr_idx_; }
  std::span<const double> csr_values() const { return csr_val_; }

  /// Entries in column-major order.
  std::vector<Triplet> triplets() const;

  /// Returns D_r * A * D_c.
  SparseMatrix scaled(std::span<const double> row_scale,
                      std::span<const double> col_scale) const;

  bool operator==(const SparseMatrix& other) const = default;

 private:
  void build_row_mirror();

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int64_t> csc_ptr_{0};
  std::vector<std::int32_t> csc_idx_;
  std::vector<double> csc_val_;
  std::vector<std::int64_t> csr_ptr_{0};
  std::vector<std::int32_t> csr_idx_;
  std::vector<double> csr_val_;
};

/// out = A*x. Throws std::invalid_argument on dimension mismatch.
void spmv(const SparseMatrix& a, std::span<const double> x,
          std::span<double> out);
Vector spmv(const SparseMatrix& a, std::span<const double> x);

/// out = A^T*y.
void spmv_t(const SparseMatrix& a, std::span<const double> y,
            std::span<double> out);
Vector spmv_t(const SparseMatrix& a, std::span<const double> y);

struct PowerIterationOptions {
  double rel_tol = 1e-4;
  int max_iter = 5000;
  double safety = 1.05;
  std::uint64_t seed = 20240917;
};

/// safety * (power-iteration estimate of lambda_max(A A^T)).
///
/// Power iteration approaches ||A||^2 from below, so the safety factor is what
/// keeps the result on the admissible side. Throws std::invalid_argument when
/// A has no nonzero entry.
double estimate_lambda_a(const SparseMatrix& a,
                         const PowerIterationOptions& opts = {});

}  // namespace hprlp

#endif  // HPRLP_SPARSE_HPP
