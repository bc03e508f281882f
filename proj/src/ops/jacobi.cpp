#include "arock/ops/jacobi.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <sstream>
#include <stdexcept>

namespace arock {

JacobiOp::JacobiOp(SparseMatrixCSR A, Vec b, BlockLayout layout)
    : A_(std::move(A)), b_(std::move(b)), layout_(std::move(layout)) {
  const std::size_t n = A_.rows();
  if (A_.cols() != n) throw std::invalid_argument("JacobiOp: A must be square");
  if (b_.size() != n) throw std::invalid_argument("JacobiOp: b has wrong size");
  if (layout_.num_blocks() == 0) layout_ = BlockLayout::scalar(n);
  if (layout_.dim() != n) throw std::invalid_argument("JacobiOp: layout does not cover A");

  inv_diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = A_.at(i, i);
    if (d == 0.0) throw std::invalid_argument("JacobiOp: zero diagonal entry at row " + std::to_string(i));
    inv_diag_[i] = 1.0 / d;
  }

  auto apply = [&](std::span<const double> x, std::span<double> y) {
    A_.multiply(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = -inv_diag_[i] * (y[i] - x[i] / inv_diag_[i]);
  };
  auto adjoint = [&](std::span<const double> x, std::span<double> y) {
    Vec w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = inv_diag_[i] * x[i];
    A_.multiply_transpose(w, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = -(y[i] - w[i] / inv_diag_[i]);
  };
  iteration_norm_ = spectral_norm(apply, adjoint, n, n, 1e-8, 10000).value;
  if (iteration_norm_ > 1.0) {
    std::ostringstream msg;
    msg << "jacobi: estimated |M|_2 = " << iteration_norm_
        << " exceeds 1; T may be expansive";
    warnings_.push_back(msg.str());
  }
}

double jacobi_block(const JacobiOp& op, std::size_t row, const StateView& xhat) {
  const auto& A = op.matrix();
  const auto& idx = A.col_idx();
  const auto& val = A.values();
  double s = 0.0;
  for (std::size_t k = A.row_begin(row); k < A.row_end(row); ++k) s += val[k] * xhat[idx[k]];
  return (s - op.rhs()[row]) * op.inv_diagonal()[row];
}

void JacobiOp::eval_S_block(std::size_t block, const StateView& x, const StateView&,
                            std::span<double> out) const {
  const std::size_t first = layout_.begin(block);
  for (std::size_t r = first; r < layout_.end(block); ++r) out[r - first] = jacobi_block(*this, r, x);
}

void JacobiOp::eval_S_full(std::span<const double> x, std::span<double> out) const {
  check_dim(x.size(), "x");
  check_dim(out.size(), "out");
  A_.multiply(x, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - b_[i]) * inv_diag_[i];
}

double JacobiOp::linear_residual(std::span<const double> x) const {
  Vec r = A_.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b_[i];
  return norm(r);
}

Vec JacobiOp::direct_solve() const {
  const auto n = static_cast<Eigen::Index>(A_.rows());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(A_.nnz());
  for (std::size_t r = 0; r < A_.rows(); ++r)
    for (std::size_t k = A_.row_begin(r); k < A_.row_end(r); ++k)
      t.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(A_.col_idx()[k]),
                     A_.values()[k]);
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw std::runtime_error("JacobiOp: A is singular");
  const Eigen::Map<const Eigen::VectorXd> rhs(b_.data(), n);
  const Eigen::VectorXd sol = lu.solve(rhs);
  return Vec(sol.data(), sol.data() + n);
}

}  // namespace arock
