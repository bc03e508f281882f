#include "arock/ops/decentral_grad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arock {

DecentralGradOp::DecentralGradOp(SparseMatrixCSR W, std::vector<LocalQuadratic> locals,
                                 double gamma)
    : W_(std::move(W)), locals_(std::move(locals)), gamma_(gamma) {
  const std::size_t m = W_.rows();
  if (m == 0 || W_.cols() != m) throw std::invalid_argument("DecentralGradOp: W must be square");
  if (locals_.size() != m)
    throw std::invalid_argument("DecentralGradOp: need one local function per agent");
  if (!(gamma_ > 0.0)) throw std::invalid_argument("DecentralGradOp: gamma must be positive");

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    double row_sum = 0.0;
    for (std::size_t k = W_.row_begin(r); k < W_.row_end(r); ++k) {
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(W_.col_idx()[k])) =
          W_.values()[k];
      row_sum += W_.values()[k];
    }
    if (std::abs(row_sum - 1.0) > 1e-12)
      throw std::invalid_argument("DecentralGradOp: W row " + std::to_string(r) +
                                  " does not sum to 1");
  }
  if ((dense - dense.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("DecentralGradOp: W is not symmetric");
  lambda_min_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense, Eigen::EigenvaluesOnly)
                    .eigenvalues()
                    .minCoeff();

  d_ = static_cast<std::size_t>(locals_[0].c.size());
  if (d_ == 0) throw std::invalid_argument("DecentralGradOp: empty local variable");
  double max_local = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& f = locals_[i];
    if (static_cast<std::size_t>(f.c.size()) != d_ || f.Q.rows() != f.c.size() ||
        f.Q.cols() != f.c.size())
      throw std::invalid_argument("DecentralGradOp: local " + std::to_string(i) +
                                  " has inconsistent dimensions");
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f.Q, Eigen::EigenvaluesOnly).eigenvalues();
    if (ev.minCoeff() < -1e-12)
      throw std::invalid_argument("DecentralGradOp: local " + std::to_string(i) + " is not convex");
    max_local = std::max(max_local, ev.maxCoeff());
  }
  L_ = max_local + (1.0 - lambda_min_) / gamma_;
  if (!(L_ > 0.0)) throw std::invalid_argument("DecentralGradOp: zero curvature");
  layout_ = BlockLayout::uniform(m, d_);
}

void DecentralGradOp::block_gradient(std::size_t agent, const StateView& x,
                                     std::span<double> out) const {
  const auto& f = locals_[agent];
  const std::size_t base = agent * d_;
  for (std::size_t a = 0; a < d_; ++a) {
    double g = -f.c[static_cast<Eigen::Index>(a)];
    for (std::size_t b = 0; b < d_; ++b)
      g += f.Q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * x[base + b];
    double mixed = 0.0;
    for (std::size_t k = W_.row_begin(agent); k < W_.row_end(agent); ++k)
      mixed += W_.values()[k] * x[W_.col_idx()[k] * d_ + a];
    out[a] = g + (x[base + a] - mixed) / gamma_;
  }
}

void DecentralGradOp::eval_S_block(std::size_t block, const StateView& x, const StateView&,
                                   std::span<double> out) const {
  block_gradient(block, x, out);
  const double scale = 2.0 / L_;
  for (double& v : out) v *= scale;
}

std::optional<double> DecentralGradOp::objective(std::span<const double> x) const {
  const std::size_t m = locals_.size();
  double f = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Map<const Eigen::VectorXd> xi(x.data() + i * d_, static_cast<Eigen::Index>(d_));
    f += 0.5 * xi.dot(locals_[i].Q * xi) - locals_[i].c.dot(xi);
  }
  // x'(I - W)x over each coordinate slice.
  double pen = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < d_; ++a) {
      double wx = 0.0;
      for (std::size_t k = W_.row_begin(i); k < W_.row_end(i); ++k)
        wx += W_.values()[k] * x[W_.col_idx()[k] * d_ + a];
      pen += x[i * d_ + a] * (x[i * d_ + a] - wx);
    }
  return f + pen / (2.0 * gamma_);
}

Vec decentral_grad_step(const DecentralGradOp& op, std::size_t agent, std::span<const double> x_i,
                        std::span<const double> xhat, double eta) {
  const std::size_t d = op.local_dim();
  if (agent >= op.num_blocks()) throw std::out_of_range("decentral_grad_step: bad agent");
  if (x_i.size() != d || xhat.size() != op.dim())
    throw std::invalid_argument("decentral_grad_step: dimension mismatch");
  Vec read(xhat.begin(), xhat.end());
  std::copy(x_i.begin(), x_i.end(), read.begin() + static_cast<std::ptrdiff_t>(agent * d));
  Vec g(d);
  op.block_gradient(agent, StateView(read), g);
  Vec out(x_i.begin(), x_i.end());
  const double step = eta / op.lipschitz();
  for (std::size_t a = 0; a < d; ++a) out[a] -= step * g[a];
  return out;
}

}  // namespace arock
