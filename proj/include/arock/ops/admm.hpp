#pragma once

#include <Eigen/Dense>
#include <vector>

#include "arock/core/operator.hpp"
#include "arock/ops/convex_term.hpp"

namespace arock {

/// One independent piece of min f(x) + g(y) s.t. Ax + By = b.
struct AdmmBlock {
  ConvexTerm f;
  ConvexTerm g;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::VectorXd b;
};

struct DualProx {
  Eigen::VectorXd z_plus;
  Eigen::VectorXd minimizer;  ///< x (for d_f) or y (for d_g)
  double residual = 0.0;
};

struct PrimalPair {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

/// ADMM as Douglas-Rachford on the dual, d_f(w) = f*(A'w) and
/// d_g(w) = g*(B'w) - <w, b>. One block per AdmmBlock, holding its dual
/// variable. With w_g = prox_{gamma d_g}(z) and w_f = prox_{gamma d_f}(2 w_g - z),
/// S z = w_g - w_f, so a unit-probability update reads z += eta (w_f - w_g).
class AdmmDualOp final : public ProblemOperator {
 public:
  AdmmDualOp(std::vector<AdmmBlock> blocks, double gamma, double tol = 1e-10);

  std::string name() const override { return "admm-dual"; }
  const BlockLayout& layout() const override { return layout_; }
  void eval_S_block(std::size_t block, const StateView& z, const StateView& aux,
                    std::span<double> out) const override;
  std::optional<double> objective(std::span<const double> z) const override;

  /// z+ = z - gamma A x+ with x+ = argmin f(x) - <z, Ax> + (gamma/2)|Ax|^2.
  DualProx prox_dual_f(std::size_t block, const Eigen::VectorXd& z) const;
  /// z+ = z - gamma (B y+ - b) with y+ = argmin g(y) - <z, By - b> + (gamma/2)|By - b|^2.
  DualProx prox_dual_g(std::size_t block, const Eigen::VectorXd& z) const;
  /// Primal minimizers reached from dual z: y from the d_g step, x from the
  /// reflected d_f step.
  std::vector<PrimalPair> recover(std::span<const double> z) const;

  double gamma() const { return gamma_; }
  const std::vector<AdmmBlock>& blocks() const { return blocks_; }

 private:
  std::vector<AdmmBlock> blocks_;
  std::vector<SubproblemSolver> solve_f_;
  std::vector<SubproblemSolver> solve_g_;
  double gamma_;
  BlockLayout layout_;
};

/// Increment eta (w_f - w_g) for one block's dual from its (possibly stale) value.
Vec admm_naive_step(const AdmmDualOp& op, std::size_t block, std::span<const double> zhat_block,
                    double eta);

}  // namespace arock
