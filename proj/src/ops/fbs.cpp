#include "arock/ops/fbs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "arock/ops/convex_term.hpp"

namespace arock {
namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

constexpr std::size_t kDenseLimit = 2000;

}  // namespace

FbsL1Op::FbsL1Op(Loss loss, SparseMatrixCSR A, Vec targets, double lambda, BlockLayout layout)
    : loss_(loss),
      A_(std::move(A)),
      targets_(std::move(targets)),
      lambda_(lambda),
      layout_(std::move(layout)) {
  if (A_.rows() == 0 || A_.cols() == 0) throw std::invalid_argument("FbsL1Op: empty data");
  if (targets_.size() != A_.rows()) throw std::invalid_argument("FbsL1Op: target size mismatch");
  if (!(lambda_ >= 0.0)) throw std::invalid_argument("FbsL1Op: lambda must be nonnegative");
  if (layout_.num_blocks() == 0) layout_ = BlockLayout::scalar(A_.cols());
  if (layout_.dim() != A_.cols()) throw std::invalid_argument("FbsL1Op: layout does not match A");
  At_ = A_.transpose();
  inv_n_ = 1.0 / static_cast<double>(A_.rows());
}

void FbsL1Op::set_gamma(double gamma) {
  if (!(L_ > 0.0)) throw std::invalid_argument(name() + ": data matrix is zero");
  if (gamma <= 0.0) gamma = 1.9 / L_;
  if (!(gamma < 2.0 / L_)) {
    std::ostringstream msg;
    msg << name() << ": gamma = " << gamma << " must lie in (0, 2/L) with L = " << L_;
    throw std::invalid_argument(msg.str());
  }
  gamma_ = gamma;
}

FbsL1Op FbsL1Op::logistic(const LabeledDataset& data, double lambda, double gamma,
                          BlockLayout layout) {
  data.validate();
  FbsL1Op op(Loss::logistic, data.samples, Vec(data.labels.begin(), data.labels.end()), lambda,
             std::move(layout));
  const double s = spectral_norm(op.A_, 50, 0.0);
  op.L_ = s * s * op.inv_n_ / 4.0;
  op.set_gamma(gamma);
  return op;
}

FbsL1Op FbsL1Op::least_squares(SparseMatrixCSR A, Vec y, double lambda, double gamma,
                               BlockLayout layout) {
  FbsL1Op op(Loss::least_squares, std::move(A), std::move(y), lambda, std::move(layout));
  const std::size_t n = op.A_.cols();
  if (n <= kDenseLimit) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < op.A_.rows(); ++r)
      for (std::size_t p = op.A_.row_begin(r); p < op.A_.row_end(r); ++p)
        for (std::size_t q = op.A_.row_begin(r); q < op.A_.row_end(r); ++q)
          G(static_cast<Eigen::Index>(op.A_.col_idx()[p]),
            static_cast<Eigen::Index>(op.A_.col_idx()[q])) +=
              op.A_.values()[p] * op.A_.values()[q];
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues();
    op.L_ = ev.maxCoeff() * op.inv_n_;
    op.mu_ = std::max(0.0, ev.minCoeff() * op.inv_n_);
  } else {
    const double s = spectral_norm(op.A_, 1000, 1e-10);
    op.L_ = s * s * op.inv_n_;
  }
  op.set_gamma(gamma);
  return op;
}

void FbsL1Op::init_aux(std::span<const double> x, std::span<double> aux) const {
  A_.multiply(x, aux);
}

void FbsL1Op::aux_delta(std::size_t block, std::span<const double> delta,
                        const AuxSink& aux) const {
  const std::size_t first = layout_.begin(block);
  for (std::size_t c = first; c < layout_.end(block); ++c) {
    const double d = delta[c - first];
    if (d == 0.0) continue;
    for (std::size_t k = At_.row_begin(c); k < At_.row_end(c); ++k)
      aux.add(At_.col_idx()[k], At_.values()[k] * d);
  }
}

double FbsL1Op::partial(std::size_t coord, const StateView& Ax) const {
  double g = 0.0;
  if (loss_ == Loss::logistic) {
    for (std::size_t k = At_.row_begin(coord); k < At_.row_end(coord); ++k) {
      const std::size_t r = At_.col_idx()[k];
      const double b = targets_[r];
      g -= b * At_.values()[k] * sigmoid(-b * Ax[r]);
    }
  } else {
    for (std::size_t k = At_.row_begin(coord); k < At_.row_end(coord); ++k) {
      const std::size_t r = At_.col_idx()[k];
      g += At_.values()[k] * (Ax[r] - targets_[r]);
    }
  }
  return g * inv_n_;
}

void FbsL1Op::eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                           std::span<double> out) const {
  const double thresh = gamma_ * lambda_;
  const std::size_t first = layout_.begin(block);
  for (std::size_t c = first; c < layout_.end(block); ++c) {
    const double xc = x[c];
    out[c - first] = xc - soft_threshold(xc - gamma_ * partial(c, aux), thresh);
  }
}

Vec FbsL1Op::smooth_gradient(std::span<const double> x) const {
  const Vec ax = A_.multiply(x);
  const StateView av(ax);
  Vec g(A_.cols());
  for (std::size_t c = 0; c < g.size(); ++c) g[c] = partial(c, av);
  return g;
}

std::optional<double> FbsL1Op::objective(std::span<const double> x) const {
  const Vec ax = A_.multiply(x);
  double f = 0.0;
  for (std::size_t r = 0; r < ax.size(); ++r) {
    if (loss_ == Loss::logistic)
      f += softplus(-targets_[r] * ax[r]);
    else
      f += 0.5 * (ax[r] - targets_[r]) * (ax[r] - targets_[r]);
  }
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return f * inv_n_ + lambda_ * l1;
}

Vec fbs_block(const FbsL1Op& op, std::size_t block, std::span<const double> xhat,
              std::span<const double> Axhat) {
  if (block >= op.num_blocks()) throw std::out_of_range("fbs_block: block out of range");
  if (xhat.size() != op.dim() || Axhat.size() != op.aux_dim())
    throw std::invalid_argument("fbs_block: dimension mismatch");
  Vec out(op.layout().size(block));
  op.eval_S_block(block, StateView(xhat), StateView(Axhat), out);
  return out;
}

}  // namespace arock
