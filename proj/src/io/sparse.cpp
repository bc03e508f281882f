#include "arock/io/sparse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "arock/core/linalg.hpp"

namespace arock {

SparseMatrixCSR::SparseMatrixCSR(std::size_t rows, std::size_t cols,
                                 std::vector<std::size_t> row_ptr,
                                 std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  validate();
}

void SparseMatrixCSR::validate() const {
  if (row_ptr_.size() != rows_ + 1)
    throw std::invalid_argument("CSR: row_ptr has " + std::to_string(row_ptr_.size()) +
                                " entries, expected rows + 1 = " + std::to_string(rows_ + 1));
  if (row_ptr_.front() != 0) throw std::invalid_argument("CSR: row_ptr[0] must be 0");
  if (col_idx_.size() != values_.size())
    throw std::invalid_argument("CSR: col_idx and values differ in length");
  if (row_ptr_.back() != col_idx_.size())
    throw std::invalid_argument("CSR: row_ptr[rows] != nnz");
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r])
      throw std::invalid_argument("CSR: row_ptr decreases at row " + std::to_string(r));
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_)
        throw std::invalid_argument("CSR: column index out of range in row " + std::to_string(r));
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("CSR: column indices not strictly increasing in row " +
                                    std::to_string(r));
    }
  }
}

SparseMatrixCSR SparseMatrixCSR::from_triplets(std::size_t rows, std::size_t cols,
                                               std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0), col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const auto& e = entries[k];
    if (e.row >= rows || e.col >= cols)
      throw std::invalid_argument("CSR: triplet outside the matrix shape");
    double v = 0.0;
    std::size_t k2 = k;
    while (k2 < entries.size() && entries[k2].row == e.row && entries[k2].col == e.col)
      v += entries[k2++].value;
    if (v != 0.0) {
      col_idx.push_back(e.col);
      values.push_back(v);
      ++row_ptr[e.row + 1];
    }
    k = k2;
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
  return SparseMatrixCSR(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

double SparseMatrixCSR::at(std::size_t r, std::size_t c) const {
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrixCSR::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("CSR multiply: dimension mismatch");
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseMatrixCSR::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void SparseMatrixCSR::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_)
    throw std::invalid_argument("CSR multiply_transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += values_[k] * x[r];
}

SparseMatrixCSR SparseMatrixCSR::transpose() const {
  std::vector<std::size_t> ptr(cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) ptr[c + 1] += ptr[c];
  std::vector<std::size_t> idx(nnz()), next(ptr.begin(), ptr.end() - 1);
  std::vector<double> val(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      idx[dst] = r;
      val[dst] = values_[k];
    }
  return SparseMatrixCSR(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

double spectral_norm(const SparseMatrixCSR& A, std::size_t iterations, double tol,
                     std::size_t seed) {
  return spectral_norm(
             [&](std::span<const double> x, std::span<double> y) { A.multiply(x, y); },
             [&](std::span<const double> x, std::span<double> y) { A.multiply_transpose(x, y); },
             A.cols(), A.rows(), tol, iterations, seed)
      .value;
}

}  // namespace arock
