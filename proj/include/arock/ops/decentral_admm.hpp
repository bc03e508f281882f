#pragma once

#include <array>
#include <vector>

#include "arock/core/operator.hpp"
#include "arock/io/graph.hpp"
#include "arock/ops/convex_term.hpp"

namespace arock {

/// Decentralized ADMM for min sum_i f_i(x_i) s.t. x_i = y_e = x_j on every
/// edge e = (i, j). Each edge carries two duals z_{e,i} and z_{e,j} in R^d,
/// each owned by its endpoint.
///
/// Agent mode: one block per agent holding the duals on its incident edges,
///   x_i = argmin f_i(x) + <sum_e z_{e,other}, x> + (gamma |E(i)| / 2)|x|^2,
///   (S z)_{e,i} = (z_{e,i} + z_{e,other}) / 2 + gamma x_i.
/// Edge mode: one block per edge with the x and y updates swapped,
///   x_s = argmin f_s(x) - <sum_e z_{e,s}, x> + (gamma |E(s)| / 2)|x|^2,
///   w_f = z_{e,s} - gamma x_s,  v = 2 w_f - z_{e,s},
///   y_e = -(v_i + v_j) / (2 gamma),  w_g = v + gamma y_e,  (S z)_{e,s} = w_f - w_g.
class DecentralAdmmOp final : public ProblemOperator {
 public:
  enum class Mode { agent, edge };

  /// Throws on a node without edges.
  DecentralAdmmOp(GraphSpec graph, std::vector<ConvexTerm> locals, double gamma, Mode mode,
                  double tol = 1e-10);

  std::string name() const override {
    return mode_ == Mode::agent ? "decentral-admm-agent" : "decentral-admm-edge";
  }
  const BlockLayout& layout() const override { return layout_; }
  void eval_S_block(std::size_t block, const StateView& z, const StateView& aux,
                    std::span<double> out) const override;
  /// sum_i f_i(x_i) at the recovered local solutions.
  std::optional<double> objective(std::span<const double> z) const override;

  Mode mode() const { return mode_; }
  const GraphSpec& graph() const { return graph_; }
  std::size_t local_dim() const { return d_; }
  double gamma() const { return gamma_; }
  /// Offset of dual z_{e,s} in the state, side 0 for the smaller endpoint.
  std::size_t slot(std::size_t edge, std::size_t side) const { return slot_[edge][side]; }

  /// Agent i's local solution for the given reads (mode-specific subproblem).
  Vec local_solution(std::size_t agent, const StateView& z) const;
  /// All local solutions stacked, agent-major.
  Vec primal(std::span<const double> z) const;
  /// Largest |x_i - x_j| over edges.
  double consensus_gap(std::span<const double> z) const;

 private:
  std::size_t side_of(std::size_t edge, std::size_t node) const {
    return graph_.edges[edge].first == node ? 0 : 1;
  }

  GraphSpec graph_;
  std::vector<ConvexTerm> locals_;
  std::vector<SubproblemSolver> solvers_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::array<std::size_t, 2>> slot_;
  double gamma_;
  Mode mode_;
  std::size_t d_ = 0;
  BlockLayout layout_;
};

/// Increments for all duals owned by agent i under eta: z += eta (w_g - w_f)
/// in agent mode. Laid out as the agent's block.
Vec decentral_admm_agent_step(const DecentralAdmmOp& op, std::size_t agent,
                              std::span<const double> zhat, double eta);
/// Increments (z_{e,i}, z_{e,j}) for an activated edge in edge mode.
Vec decentral_admm_edge_step(const DecentralAdmmOp& op, std::size_t edge,
                             std::span<const double> zhat, double eta);

}  // namespace arock
