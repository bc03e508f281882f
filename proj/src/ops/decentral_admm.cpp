#include "arock/ops/decentral_admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arock {

DecentralAdmmOp::DecentralAdmmOp(GraphSpec graph, std::vector<ConvexTerm> locals, double gamma,
                                 Mode mode, double tol)
    : graph_(std::move(graph)), locals_(std::move(locals)), gamma_(gamma), mode_(mode) {
  graph_.validate(false);
  const std::size_t m = graph_.nodes;
  if (locals_.size() != m)
    throw std::invalid_argument("DecentralAdmmOp: need one local function per node");
  if (!(gamma_ > 0.0)) throw std::invalid_argument("DecentralAdmmOp: gamma must be positive");
  incident_ = graph_.incident_edges();
  for (std::size_t i = 0; i < m; ++i)
    if (incident_[i].empty())
      throw std::invalid_argument("DecentralAdmmOp: node " + std::to_string(i) +
                                  " has no edges; its subproblem is ill-posed");
  d_ = term_dim(locals_[0]);
  if (d_ == 0) throw std::invalid_argument("DecentralAdmmOp: zero-dimensional variable");
  const auto n = static_cast<Eigen::Index>(d_);
  for (std::size_t i = 0; i < m; ++i) {
    if (term_dim(locals_[i]) != d_)
      throw std::invalid_argument("DecentralAdmmOp: node " + std::to_string(i) +
                                  " has a different dimension");
    solvers_.emplace_back(locals_[i], Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
                          gamma_ * static_cast<double>(incident_[i].size()), tol);
  }

  slot_.assign(graph_.edges.size(), {0, 0});
  std::vector<std::size_t> sizes;
  std::size_t offset = 0;
  if (mode_ == Mode::agent) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t e : incident_[i]) {
        slot_[e][side_of(e, i)] = offset;
        offset += d_;
      }
      sizes.push_back(incident_[i].size() * d_);
    }
  } else {
    for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
      slot_[e] = {offset, offset + d_};
      offset += 2 * d_;
      sizes.push_back(2 * d_);
    }
  }
  layout_ = BlockLayout::from_sizes(sizes);
}

Vec DecentralAdmmOp::local_solution(std::size_t agent, const StateView& z) const {
  const auto n = static_cast<Eigen::Index>(d_);
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(n);
  for (std::size_t e : incident_[agent]) {
    const std::size_t own = side_of(e, agent);
    if (mode_ == Mode::agent) {
      const std::size_t base = slot_[e][1 - own];
      for (Eigen::Index a = 0; a < n; ++a) lin[a] -= z[base + static_cast<std::size_t>(a)];
    } else {
      const std::size_t base = slot_[e][own];
      for (Eigen::Index a = 0; a < n; ++a) lin[a] += z[base + static_cast<std::size_t>(a)];
    }
  }
  const Eigen::VectorXd x = solvers_[agent].solve(lin).v;
  return Vec(x.data(), x.data() + n);
}

void DecentralAdmmOp::eval_S_block(std::size_t block, const StateView& z, const StateView&,
                                   std::span<double> out) const {
  if (mode_ == Mode::agent) {
    const Vec x = local_solution(block, z);
    std::size_t t = 0;
    for (std::size_t e : incident_[block]) {
      const std::size_t own = side_of(e, block);
      const std::size_t mine = slot_[e][own], theirs = slot_[e][1 - own];
      for (std::size_t a = 0; a < d_; ++a)
        out[t++] = 0.5 * (z[mine + a] + z[theirs + a]) + gamma_ * x[a];
    }
    return;
  }
  const auto [i, j] = graph_.edges[block];
  const Vec xi = local_solution(i, z), xj = local_solution(j, z);
  const std::size_t si = slot_[block][0], sj = slot_[block][1];
  for (std::size_t a = 0; a < d_; ++a) {
    const double zi = z[si + a], zj = z[sj + a];
    const double wf_i = zi - gamma_ * xi[a];
    const double wf_j = zj - gamma_ * xj[a];
    const double v_i = 2.0 * wf_i - zi;
    const double v_j = 2.0 * wf_j - zj;
    const double y = -(v_i + v_j) / (2.0 * gamma_);
    out[a] = wf_i - (v_i + gamma_ * y);
    out[d_ + a] = wf_j - (v_j + gamma_ * y);
  }
}

Vec DecentralAdmmOp::primal(std::span<const double> z) const {
  check_dim(z.size(), "z");
  const StateView zv(z);
  Vec x(graph_.nodes * d_);
  for (std::size_t i = 0; i < graph_.nodes; ++i) {
    const Vec xi = local_solution(i, zv);
    std::copy(xi.begin(), xi.end(), x.begin() + static_cast<std::ptrdiff_t>(i * d_));
  }
  return x;
}

double DecentralAdmmOp::consensus_gap(std::span<const double> z) const {
  const Vec x = primal(z);
  double gap = 0.0;
  for (const auto& [i, j] : graph_.edges)
    for (std::size_t a = 0; a < d_; ++a) gap = std::max(gap, std::abs(x[i * d_ + a] - x[j * d_ + a]));
  return gap;
}

std::optional<double> DecentralAdmmOp::objective(std::span<const double> z) const {
  const Vec x = primal(z);
  double total = 0.0;
  for (std::size_t i = 0; i < graph_.nodes; ++i) {
    const Eigen::Map<const Eigen::VectorXd> xi(x.data() + i * d_, static_cast<Eigen::Index>(d_));
    total += term_value(locals_[i], xi);
  }
  return total;
}

namespace {

Vec scaled_block_step(const DecentralAdmmOp& op, std::size_t block, std::span<const double> zhat,
                      double eta) {
  if (block >= op.num_blocks()) throw std::out_of_range("decentral admm step: block out of range");
  if (zhat.size() != op.dim()) throw std::invalid_argument("decentral admm step: dimension mismatch");
  Vec delta(op.layout().size(block));
  op.eval_S_block(block, StateView(zhat), StateView(), delta);
  for (double& v : delta) v = -eta * v;
  return delta;
}

}  // namespace

Vec decentral_admm_agent_step(const DecentralAdmmOp& op, std::size_t agent,
                              std::span<const double> zhat, double eta) {
  if (op.mode() != DecentralAdmmOp::Mode::agent)
    throw std::invalid_argument("decentral_admm_agent_step: operator is in edge mode");
  return scaled_block_step(op, agent, zhat, eta);
}

Vec decentral_admm_edge_step(const DecentralAdmmOp& op, std::size_t edge,
                             std::span<const double> zhat, double eta) {
  if (op.mode() != DecentralAdmmOp::Mode::edge)
    throw std::invalid_argument("decentral_admm_edge_step: operator is in agent mode");
  return scaled_block_step(op, edge, zhat, eta);
}

}  // namespace arock
