#pragma once

#include <Eigen/Dense>
#include <vector>

#include "arock/core/operator.hpp"
#include "arock/io/sparse.hpp"

namespace arock {

/// f_i(v) = 0.5 v'Qv - c'v on one agent's d-dimensional copy.
struct LocalQuadratic {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
};

/// Penalized decentralized gradient: agent i owns x_i in R^d and
///   S x = (2/L) (grad F(x) + (1/gamma) (I - W) x),
/// with W symmetric doubly stochastic, F(x) = sum_i f_i(x_i) and
/// L = max_i L_i + (1 - lambda_min(W)) / gamma. The own block is always read
/// fresh; only neighbours may be stale.
class DecentralGradOp final : public ProblemOperator {
 public:
  DecentralGradOp(SparseMatrixCSR W, std::vector<LocalQuadratic> locals, double gamma);

  std::string name() const override { return "decentral-grad"; }
  const BlockLayout& layout() const override { return layout_; }
  bool own_block_fresh() const override { return true; }
  void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                    std::span<double> out) const override;
  std::optional<double> objective(std::span<const double> x) const override;

  double lipschitz() const { return L_; }
  double lambda_min_W() const { return lambda_min_; }
  double gamma() const { return gamma_; }
  const SparseMatrixCSR& mixing() const { return W_; }
  std::size_t local_dim() const { return d_; }

  /// Gradient of the penalized objective restricted to agent i.
  void block_gradient(std::size_t agent, const StateView& x, std::span<double> out) const;

 private:
  SparseMatrixCSR W_;
  std::vector<LocalQuadratic> locals_;
  double gamma_;
  std::size_t d_ = 0;
  BlockLayout layout_;
  double lambda_min_ = 0.0;
  double L_ = 0.0;
};

/// New x_i after one local step with stepsize eta / L:
/// x_i - (eta / L)(grad f_i(x_i) + (1/gamma)(x_i - sum_j w_ij xhat_j)).
/// Agent i's own entries in `xhat` are replaced by `x_i`.
Vec decentral_grad_step(const DecentralGradOp& op, std::size_t agent, std::span<const double> x_i,
                        std::span<const double> xhat, double eta);

}  // namespace arock
