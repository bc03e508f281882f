#pragma once

#include <vector>

#include "arock/core/operator.hpp"
#include "arock/ops/convex_term.hpp"

namespace arock {

/// Consensus ADMM for min_y sum_i f_i(y), written as x_i = y with the dual
/// z_i of each constraint owned by agent i. The shared aggregate
/// y = -(1/(gamma m)) sum_i z_i is the auxiliary cache. For agent i:
///   w_g = z_i + gamma y,  x_i = argmin f_i(x) - <2 w_g - z_i, x> + (gamma/2)|x|^2,
///   w_f = 2 w_g - z_i - gamma x_i,  (S z)_i = w_g - w_f.
class ConsensusAdmmOp final : public ProblemOperator {
 public:
  ConsensusAdmmOp(std::vector<ConvexTerm> locals, double gamma, double tol = 1e-10);

  std::string name() const override { return "consensus-admm"; }
  const BlockLayout& layout() const override { return layout_; }
  std::size_t aux_dim() const override { return d_; }
  void init_aux(std::span<const double> z, std::span<double> aux) const override;
  void aux_delta(std::size_t block, std::span<const double> delta,
                 const AuxSink& aux) const override;
  void eval_S_block(std::size_t block, const StateView& z, const StateView& aux,
                    std::span<double> out) const override;
  /// sum_i f_i at the consensus point.
  std::optional<double> objective(std::span<const double> z) const override;

  /// The consensus point y recovered from z.
  Vec primal(std::span<const double> z) const;
  /// Agent i's local minimizer x_i for the given reads.
  Vec local_solution(std::size_t agent, std::span<const double> z_i, std::span<const double> y) const;

  std::size_t local_dim() const { return d_; }
  double gamma() const { return gamma_; }

 private:
  std::vector<ConvexTerm> locals_;
  std::vector<SubproblemSolver> solvers_;
  double gamma_;
  std::size_t d_ = 0;
  BlockLayout layout_;
};

struct ConsensusStep {
  Vec z_delta;
  Vec y_delta;
};

/// One agent activation: z_i += eta (w_f - w_g) and the matching change of y.
ConsensusStep consensus_admm_step(const ConsensusAdmmOp& op, std::size_t agent,
                                  std::span<const double> zhat_all, std::span<const double> y,
                                  double eta);

}  // namespace arock
