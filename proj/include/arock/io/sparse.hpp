#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace arock {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Construction validates the structure:
/// row_ptr monotone with row_ptr[0] = 0 and row_ptr[rows] = nnz, column
/// indices strictly increasing within each row and below `cols`.
class SparseMatrixCSR {
 public:
  SparseMatrixCSR() : row_ptr_(1, 0) {}
  SparseMatrixCSR(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                  std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Sorts entries and sums duplicates; exact zeros are kept out.
  static SparseMatrixCSR from_triplets(std::size_t rows, std::size_t cols,
                                       std::vector<Triplet> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t row_begin(std::size_t r) const { return row_ptr_[r]; }
  std::size_t row_end(std::size_t r) const { return row_ptr_[r + 1]; }

  /// Entry (r, c), zero if absent.
  double at(std::size_t r, std::size_t c) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Transposed copy; its rows are this matrix's columns.
  SparseMatrixCSR transpose() const;

  void validate() const;

  bool operator==(const SparseMatrixCSR& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ &&
           col_idx_ == o.col_idx_ && values_ == o.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Largest singular value by power iteration.
double spectral_norm(const SparseMatrixCSR& A, std::size_t iterations, double tol = 0.0,
                     std::size_t seed = 1);

}  // namespace arock
