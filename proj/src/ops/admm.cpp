#include "arock/ops/admm.hpp"

#include <stdexcept>

namespace arock {

AdmmDualOp::AdmmDualOp(std::vector<AdmmBlock> blocks, double gamma, double tol)
    : blocks_(std::move(blocks)), gamma_(gamma) {
  if (blocks_.empty()) throw std::invalid_argument("AdmmDualOp: no blocks");
  if (!(gamma_ > 0.0)) throw std::invalid_argument("AdmmDualOp: gamma must be positive");
  std::vector<std::size_t> sizes;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const auto& blk = blocks_[j];
    const auto rows = blk.b.size();
    if (rows == 0 || blk.A.rows() != rows || blk.B.rows() != rows)
      throw std::invalid_argument("AdmmDualOp: block " + std::to_string(j) +
                                  " has inconsistent constraint rows");
    if (static_cast<std::size_t>(blk.A.cols()) != term_dim(blk.f) ||
        static_cast<std::size_t>(blk.B.cols()) != term_dim(blk.g))
      throw std::invalid_argument("AdmmDualOp: block " + std::to_string(j) +
                                  " term dimension does not match its matrix");
    solve_f_.emplace_back(blk.f, blk.A, Eigen::VectorXd::Zero(rows), gamma_, tol);
    solve_g_.emplace_back(blk.g, blk.B, blk.b, gamma_, tol);
    sizes.push_back(static_cast<std::size_t>(rows));
  }
  layout_ = BlockLayout::from_sizes(sizes);
}

DualProx AdmmDualOp::prox_dual_f(std::size_t block, const Eigen::VectorXd& z) const {
  check_block(block);
  const auto sol = solve_f_[block].solve(z);
  return {z - gamma_ * (blocks_[block].A * sol.v), sol.v, sol.residual};
}

DualProx AdmmDualOp::prox_dual_g(std::size_t block, const Eigen::VectorXd& z) const {
  check_block(block);
  const auto& blk = blocks_[block];
  const auto sol = solve_g_[block].solve(z);
  return {z - gamma_ * (blk.B * sol.v - blk.b), sol.v, sol.residual};
}

void AdmmDualOp::eval_S_block(std::size_t block, const StateView& z, const StateView&,
                              std::span<double> out) const {
  const std::size_t first = layout_.begin(block);
  Eigen::VectorXd zb(static_cast<Eigen::Index>(layout_.size(block)));
  for (Eigen::Index t = 0; t < zb.size(); ++t) zb[t] = z[first + static_cast<std::size_t>(t)];
  const Eigen::VectorXd wg = prox_dual_g(block, zb).z_plus;
  const Eigen::VectorXd wf = prox_dual_f(block, 2.0 * wg - zb).z_plus;
  for (Eigen::Index t = 0; t < zb.size(); ++t) out[static_cast<std::size_t>(t)] = wg[t] - wf[t];
}

std::vector<PrimalPair> AdmmDualOp::recover(std::span<const double> z) const {
  check_dim(z.size(), "z");
  std::vector<PrimalPair> out;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const Eigen::Map<const Eigen::VectorXd> zb(z.data() + layout_.begin(j),
                                               static_cast<Eigen::Index>(layout_.size(j)));
    const DualProx g = prox_dual_g(j, zb);
    const DualProx f = prox_dual_f(j, 2.0 * g.z_plus - zb);
    out.push_back({f.minimizer, g.minimizer});
  }
  return out;
}

std::optional<double> AdmmDualOp::objective(std::span<const double> z) const {
  const auto primal = recover(z);
  double total = 0.0;
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    total += term_value(blocks_[j].f, primal[j].x) + term_value(blocks_[j].g, primal[j].y);
  return total;
}

Vec admm_naive_step(const AdmmDualOp& op, std::size_t block, std::span<const double> zhat_block,
                    double eta) {
  if (block >= op.num_blocks()) throw std::out_of_range("admm_naive_step: block out of range");
  if (zhat_block.size() != op.layout().size(block))
    throw std::invalid_argument("admm_naive_step: dual block has wrong size");
  const Eigen::Map<const Eigen::VectorXd> zb(zhat_block.data(),
                                             static_cast<Eigen::Index>(zhat_block.size()));
  const Eigen::VectorXd wg = op.prox_dual_g(block, zb).z_plus;
  const Eigen::VectorXd wf = op.prox_dual_f(block, 2.0 * wg - zb).z_plus;
  Vec delta(zhat_block.size());
  for (std::size_t t = 0; t < delta.size(); ++t)
    delta[t] = eta * (wf[static_cast<Eigen::Index>(t)] - wg[static_cast<Eigen::Index>(t)]);
  return delta;
}

}  // namespace arock
