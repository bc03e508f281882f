#pragma once

#include "arock/core/operator.hpp"

namespace arock {

/// T x = scale * x. Nonexpansive for |scale| <= 1; scale > 1 is the
/// expansive negative control for the cocoercivity check.
class ScaledIdentityOp final : public ProblemOperator {
 public:
  ScaledIdentityOp(std::size_t n, double scale);
  std::string name() const override { return "scaled_identity"; }
  const BlockLayout& layout() const override { return layout_; }
  void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                    std::span<double> out) const override;

 private:
  BlockLayout layout_;
  double scale_;
};

/// T = projection onto {x : a'x <= beta}; firmly nonexpansive. The block
/// kernel reads all of x, since the constraint couples every coordinate.
class HalfspaceProjectionOp final : public ProblemOperator {
 public:
  HalfspaceProjectionOp(Vec a, double beta);
  std::string name() const override { return "halfspace_projection"; }
  const BlockLayout& layout() const override { return layout_; }
  void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                    std::span<double> out) const override;

 private:
  BlockLayout layout_;
  Vec a_;
  double beta_;
  double a_norm_sq_;
};

}  // namespace arock
