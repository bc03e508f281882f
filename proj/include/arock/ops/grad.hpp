#pragma once

#include <variant>
#include <vector>

#include "arock/core/operator.hpp"
#include "arock/io/sparse.hpp"

namespace arock {

/// One term phi(a'x) of a sparse sum, a supported on `idx`.
struct SparseTerm {
  enum class Loss { squared, logistic };
  std::vector<std::size_t> idx;
  std::vector<double> coef;
  double target = 0.0;  ///< y in 0.5 (a'x - y)^2, or the +-1 label in log(1 + exp(-y a'x))
  Loss loss = Loss::squared;
};

/// Gradient operator S = (2/L) grad f for an L-smooth convex f. Two families:
/// the quadratic 0.5 x'Ax - b'x and sums of terms touching few variables.
/// A block evaluation reads only the coordinates coupled to that block.
class GradOp final : public ProblemOperator {
 public:
  /// L <= 0 estimates the largest eigenvalue of A by power iteration.
  static GradOp quadratic(SparseMatrixCSR A, Vec b, BlockLayout layout = {}, double L = 0.0);
  /// L <= 0 uses the bound sum_t curvature_t |a_t|^2.
  static GradOp sparse_sum(std::size_t n, std::vector<SparseTerm> terms, BlockLayout layout = {},
                           double L = 0.0);

  std::string name() const override { return "grad"; }
  const BlockLayout& layout() const override { return layout_; }
  void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                    std::span<double> out) const override;
  std::optional<double> objective(std::span<const double> x) const override;

  double lipschitz() const { return L_; }
  /// Gradient of f at x.
  Vec gradient(std::span<const double> x) const;

 private:
  struct Quadratic {
    SparseMatrixCSR A;
    Vec b;
  };
  struct SparseSum {
    std::vector<SparseTerm> terms;
    std::vector<std::vector<std::pair<std::size_t, double>>> by_coord;  ///< (term, coefficient)
  };
  GradOp() = default;
  double partial(std::size_t coord, const StateView& x) const;

  std::variant<Quadratic, SparseSum> family_;
  BlockLayout layout_;
  double L_ = 0.0;
};

/// (2/L) grad_i f(xhat) for block i.
Vec grad_block(const GradOp& op, std::size_t block, std::span<const double> xhat);

}  // namespace arock
