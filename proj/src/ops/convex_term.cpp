#include "arock/ops/convex_term.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace arock {

double soft_threshold(double u, double t) {
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

std::size_t term_dim(const ConvexTerm& h) {
  struct {
    std::size_t operator()(const QuadraticTerm& t) const { return static_cast<std::size_t>(t.q.size()); }
    std::size_t operator()(const L1Term& t) const { return t.dim; }
    std::size_t operator()(const BoxTerm& t) const { return static_cast<std::size_t>(t.lo.size()); }
    std::size_t operator()(const ZeroTerm& t) const { return t.dim; }
  } visitor;
  return std::visit(visitor, h);
}

double term_value(const ConvexTerm& h, const Eigen::VectorXd& v) {
  if (auto* q = std::get_if<QuadraticTerm>(&h)) return 0.5 * v.dot(q->P * v) + q->q.dot(v);
  if (auto* l = std::get_if<L1Term>(&h)) return l->lambda * v.lpNorm<1>();
  if (auto* b = std::get_if<BoxTerm>(&h)) {
    for (Eigen::Index j = 0; j < v.size(); ++j)
      if (v[j] < b->lo[j] - 1e-12 || v[j] > b->hi[j] + 1e-12)
        return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return 0.0;
}

Eigen::VectorXd separable_prox(const ConvexTerm& h, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& t) {
  Eigen::VectorXd out = u;
  if (auto* l = std::get_if<L1Term>(&h)) {
    for (Eigen::Index j = 0; j < u.size(); ++j) out[j] = soft_threshold(u[j], l->lambda * t[j]);
  } else if (auto* b = std::get_if<BoxTerm>(&h)) {
    out = u.cwiseMax(b->lo).cwiseMin(b->hi);
  } else if (std::holds_alternative<QuadraticTerm>(h)) {
    throw std::logic_error("separable_prox: quadratic term is not handled here");
  }
  return out;
}

SubproblemSolver::SubproblemSolver(ConvexTerm h, Eigen::MatrixXd M, Eigen::VectorXd r,
                                   double gamma, double tol)
    : h_(std::move(h)), M_(std::move(M)), r_(std::move(r)), gamma_(gamma), tol_(tol) {
  if (!(gamma_ > 0.0)) throw std::invalid_argument("SubproblemSolver: gamma must be positive");
  const auto n = static_cast<Eigen::Index>(term_dim(h_));
  if (M_.cols() != n) throw std::invalid_argument("SubproblemSolver: M has wrong column count");
  if (r_.size() != M_.rows()) throw std::invalid_argument("SubproblemSolver: r has wrong size");
  if (auto* b = std::get_if<BoxTerm>(&h_))
    if (b->hi.size() != b->lo.size() || (b->hi - b->lo).minCoeff() < 0.0)
      throw std::invalid_argument("SubproblemSolver: empty box");

  if (auto* q = std::get_if<QuadraticTerm>(&h_)) {
    if (q->P.rows() != n || q->P.cols() != n)
      throw std::invalid_argument("SubproblemSolver: P has wrong shape");
    mode_ = Mode::quadratic;
    K_ = q->P + gamma_ * M_.transpose() * M_;
    ldlt_.compute(K_);
    if (ldlt_.info() != Eigen::Success)
      throw std::runtime_error("SubproblemSolver: factorization of P + gamma M'M failed");
    return;
  }
  const bool square = M_.rows() == M_.cols();
  bool diagonal = square;
  if (square) {
    for (Eigen::Index i = 0; i < M_.rows() && diagonal; ++i)
      for (Eigen::Index j = 0; j < M_.cols(); ++j)
        if (i != j && M_(i, j) != 0.0) {
          diagonal = false;
          break;
        }
    if (diagonal) diagonal = M_.diagonal().cwiseAbs().minCoeff() > 0.0;
  }
  if (diagonal) {
    mode_ = Mode::diagonal;
    diag_ = M_.diagonal();
    return;
  }
  mode_ = Mode::iterative;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M_);
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  lipschitz_ = gamma_ * smax * smax;
  if (!(lipschitz_ > 0.0)) throw std::invalid_argument("SubproblemSolver: M is zero");
}

Eigen::VectorXd SubproblemSolver::smooth_grad(const Eigen::VectorXd& z,
                                              const Eigen::VectorXd& v) const {
  return M_.transpose() * (gamma_ * (M_ * v - r_) - z);
}

double SubproblemSolver::residual(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const {
  const Eigen::VectorXd g = smooth_grad(z, v);
  if (auto* q = std::get_if<QuadraticTerm>(&h_)) return (q->P * v + q->q + g).norm();
  // Prox-gradient mapping with a unit-free step.
  const double L = mode_ == Mode::iterative ? lipschitz_
                                            : gamma_ * diag_.cwiseAbs2().maxCoeff();
  const Eigen::VectorXd t = Eigen::VectorXd::Constant(v.size(), 1.0 / L);
  const Eigen::VectorXd p = separable_prox(h_, v - g / L, t);
  return L * (v - p).norm();
}

SubproblemResult SubproblemSolver::solve(const Eigen::VectorXd& z) const {
  if (z.size() != M_.rows()) throw std::invalid_argument("SubproblemSolver: z has wrong size");
  SubproblemResult res;
  switch (mode_) {
    case Mode::quadratic: {
      const auto& q = std::get<QuadraticTerm>(h_);
      const Eigen::VectorXd rhs = M_.transpose() * (z + gamma_ * r_) - q.q;
      res.v = ldlt_.solve(rhs);
      // One refinement step tightens the residual on ill-conditioned K.
      res.v += ldlt_.solve(rhs - K_ * res.v);
      res.residual = (K_ * res.v - rhs).norm();
      if (!(res.residual <= tol_ * (1.0 + rhs.norm()))) {
        std::ostringstream msg;
        msg << "subproblem solve did not converge: residual " << res.residual;
        throw std::runtime_error(msg.str());
      }
      return res;
    }
    case Mode::diagonal: {
      const Eigen::VectorXd u = (r_ + z / gamma_).cwiseQuotient(diag_);
      const Eigen::VectorXd t = (gamma_ * diag_.cwiseAbs2()).cwiseInverse();
      res.v = separable_prox(h_, u, t);
      res.residual = residual(z, res.v);
      return res;
    }
    case Mode::iterative:
      break;
  }
  const Eigen::Index n = M_.cols();
  const Eigen::VectorXd t = Eigen::VectorXd::Constant(n, 1.0 / lipschitz_);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n), y = v, prev = v;
  double theta = 1.0;
  const double target = tol_ * (1.0 + (M_.transpose() * z).norm());
  for (int it = 0; it < 200000; ++it) {
    prev = v;
    v = separable_prox(h_, y - smooth_grad(z, y) / lipschitz_, t);
    // Gradient-based restart keeps the linear rate on strongly convex pieces.
    if ((y - v).dot(v - prev) > 0.0) theta = 1.0;
    const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    y = v + ((theta - 1.0) / next) * (v - prev);
    theta = next;
    if ((it & 31) == 31) {
      res.residual = residual(z, v);
      if (res.residual <= target) {
        res.v = v;
        return res;
      }
    }
  }
  res.residual = residual(z, v);
  if (res.residual <= target) {
    res.v = v;
    return res;
  }
  std::ostringstream msg;
  msg << "subproblem solve did not converge: residual " << res.residual;
  throw std::runtime_error(msg.str());
}

}  // namespace arock
