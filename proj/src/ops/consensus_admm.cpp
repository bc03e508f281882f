#include "arock/ops/consensus_admm.hpp"

#include <algorithm>
#include <stdexcept>

namespace arock {

ConsensusAdmmOp::ConsensusAdmmOp(std::vector<ConvexTerm> locals, double gamma, double tol)
    : locals_(std::move(locals)), gamma_(gamma) {
  if (locals_.empty()) throw std::invalid_argument("ConsensusAdmmOp: no agents");
  if (!(gamma_ > 0.0)) throw std::invalid_argument("ConsensusAdmmOp: gamma must be positive");
  d_ = term_dim(locals_[0]);
  if (d_ == 0) throw std::invalid_argument("ConsensusAdmmOp: zero-dimensional variable");
  const auto n = static_cast<Eigen::Index>(d_);
  for (std::size_t i = 0; i < locals_.size(); ++i) {
    if (term_dim(locals_[i]) != d_)
      throw std::invalid_argument("ConsensusAdmmOp: agent " + std::to_string(i) +
                                  " has a different dimension");
    solvers_.emplace_back(locals_[i], Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
                          gamma_, tol);
  }
  layout_ = BlockLayout::uniform(locals_.size(), d_);
}

void ConsensusAdmmOp::init_aux(std::span<const double> z, std::span<double> aux) const {
  std::fill(aux.begin(), aux.end(), 0.0);
  for (std::size_t i = 0; i < locals_.size(); ++i)
    for (std::size_t j = 0; j < d_; ++j) aux[j] += z[i * d_ + j];
  const double scale = -1.0 / (gamma_ * static_cast<double>(locals_.size()));
  for (double& v : aux) v *= scale;
}

void ConsensusAdmmOp::aux_delta(std::size_t, std::span<const double> delta,
                                const AuxSink& aux) const {
  const double scale = -1.0 / (gamma_ * static_cast<double>(locals_.size()));
  for (std::size_t j = 0; j < d_; ++j) aux.add(j, delta[j] * scale);
}

void ConsensusAdmmOp::eval_S_block(std::size_t block, const StateView& z, const StateView& aux,
                                   std::span<double> out) const {
  const auto n = static_cast<Eigen::Index>(d_);
  Eigen::VectorXd zi(n), wg(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    zi[j] = z[block * d_ + static_cast<std::size_t>(j)];
    wg[j] = zi[j] + gamma_ * aux[static_cast<std::size_t>(j)];
  }
  const Eigen::VectorXd v = 2.0 * wg - zi;
  const Eigen::VectorXd x = solvers_[block].solve(v).v;
  const Eigen::VectorXd wf = v - gamma_ * x;
  for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = wg[j] - wf[j];
}

Vec ConsensusAdmmOp::primal(std::span<const double> z) const {
  check_dim(z.size(), "z");
  Vec y(d_);
  init_aux(z, y);
  return y;
}

Vec ConsensusAdmmOp::local_solution(std::size_t agent, std::span<const double> z_i,
                                    std::span<const double> y) const {
  check_block(agent);
  if (z_i.size() != d_ || y.size() != d_)
    throw std::invalid_argument("ConsensusAdmmOp: local read has wrong size");
  const auto n = static_cast<Eigen::Index>(d_);
  Eigen::VectorXd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = z_i[j] + 2.0 * gamma_ * y[j];
  const Eigen::VectorXd x = solvers_[agent].solve(v).v;
  return Vec(x.data(), x.data() + n);
}

std::optional<double> ConsensusAdmmOp::objective(std::span<const double> z) const {
  const Vec y = primal(z);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(d_));
  double total = 0.0;
  for (const auto& f : locals_) total += term_value(f, yv);
  return total;
}

ConsensusStep consensus_admm_step(const ConsensusAdmmOp& op, std::size_t agent,
                                  std::span<const double> zhat_all, std::span<const double> y,
                                  double eta) {
  if (agent >= op.num_blocks()) throw std::out_of_range("consensus_admm_step: bad agent");
  if (zhat_all.size() != op.dim() || y.size() != op.aux_dim())
    throw std::invalid_argument("consensus_admm_step: dimension mismatch");
  const std::size_t d = op.local_dim();
  ConsensusStep step{Vec(d), Vec(d, 0.0)};
  op.eval_S_block(agent, StateView(zhat_all), StateView(y), step.z_delta);
  for (double& v : step.z_delta) v = -eta * v;
  op.aux_delta(agent, step.z_delta, AuxSink(std::span<double>(step.y_delta)));
  return step;
}

}  // namespace arock
