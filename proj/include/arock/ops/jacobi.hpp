#pragma once

#include <string>
#include <vector>

#include "arock/core/operator.hpp"
#include "arock/io/sparse.hpp"

namespace arock {

/// Jacobi splitting for A x = b: T x = D^{-1}(b - R x), S x = D^{-1}(A x - b),
/// with D the diagonal of A and R = A - D. T is nonexpansive when the
/// iteration matrix M = -D^{-1} R has spectral norm at most one.
class JacobiOp final : public ProblemOperator {
 public:
  /// Scalar blocks unless a layout is given. Throws on a zero diagonal entry;
  /// records a warning when the estimated |M|_2 exceeds one.
  JacobiOp(SparseMatrixCSR A, Vec b, BlockLayout layout = {});

  std::string name() const override { return "jacobi"; }
  const BlockLayout& layout() const override { return layout_; }
  void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                    std::span<double> out) const override;
  void eval_S_full(std::span<const double> x, std::span<double> out) const override;

  const SparseMatrixCSR& matrix() const { return A_; }
  const Vec& rhs() const { return b_; }
  const Vec& inv_diagonal() const { return inv_diag_; }

  /// Power-method estimate of |M|_2 (tolerance 1e-8, at most 1e4 steps).
  double iteration_norm() const { return iteration_norm_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// |A x - b|
  double linear_residual(std::span<const double> x) const;
  /// Sparse LU solution of A x = b.
  Vec direct_solve() const;

 private:
  SparseMatrixCSR A_;
  Vec b_;
  Vec inv_diag_;
  BlockLayout layout_;
  double iteration_norm_ = 0.0;
  std::vector<std::string> warnings_;
};

/// (S xhat)_i for one row: (1 / a_ii)(sum_j a_ij xhat_j - b_i).
double jacobi_block(const JacobiOp& op, std::size_t row, const StateView& xhat);

}  // namespace arock
