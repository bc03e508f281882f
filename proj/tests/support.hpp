#pragma once

// Independent reference computations for the tests: dense Eigen linear
// algebra and plain loops, sharing no code with the library's solvers.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "arock/core/linalg.hpp"
#include "arock/io/libsvm.hpp"
#include "arock/io/sparse.hpp"
#include "arock/ops/decentral_grad.hpp"

namespace oracle {

inline Eigen::MatrixXd dense(const arock::SparseMatrixCSR& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.rows()),
                                            static_cast<Eigen::Index>(A.cols()));
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t k = A.row_begin(r); k < A.row_end(r); ++k)
      D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(A.col_idx()[k])) = A.values()[k];
  return D;
}

inline Eigen::VectorXd vec(const arock::Vec& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline arock::Vec stdvec(const Eigen::VectorXd& v) { return arock::Vec(v.data(), v.data() + v.size()); }

/// Spectral norm of the Jacobi iteration matrix I - D^{-1} A.
inline double jacobi_norm(const arock::SparseMatrixCSR& A) {
  const Eigen::MatrixXd D = dense(A);
  const Eigen::VectorXd inv = D.diagonal().cwiseInverse();
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(D.rows(), D.cols()) - inv.asDiagonal() * D;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

inline arock::Vec solve(const arock::SparseMatrixCSR& A, const arock::Vec& b) {
  return stdvec(dense(A).fullPivLu().solve(vec(b)));
}

/// (1/N) sum log(1 + exp(-y a'x)) + lambda |x|_1 in long double.
inline double logistic_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double lambda,
                                 const Eigen::VectorXd& x) {
  const Eigen::VectorXd ax = A * x;
  long double f = 0.0L;
  for (Eigen::Index r = 0; r < ax.size(); ++r) {
    const long double t = -static_cast<long double>(y[r]) * ax[r];
    f += t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  }
  return static_cast<double>(f / static_cast<long double>(A.rows()) +
                             static_cast<long double>(lambda) * x.lpNorm<1>());
}

/// Serial proximal gradient with step 1/L, L = |A|_2^2 / (4N), until the
/// gradient-mapping norm drops below `tol`.
inline Eigen::VectorXd logistic_prox_grad(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                          double lambda, double tol = 1e-12,
                                          int max_iter = 2000000) {
  const double N = static_cast<double>(A.rows());
  const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
  const double step = 4.0 * N / (s * s);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd margin = (A * x).cwiseProduct(y);
    Eigen::VectorXd w(margin.size());
    for (Eigen::Index r = 0; r < w.size(); ++r) w[r] = -y[r] / (1.0 + std::exp(margin[r]));
    const Eigen::VectorXd g = A.transpose() * w / N;
    Eigen::VectorXd next = x - step * g;
    for (Eigen::Index j = 0; j < next.size(); ++j) {
      const double t = step * lambda;
      next[j] = next[j] > t ? next[j] - t : (next[j] < -t ? next[j] + t : 0.0);
    }
    const double moved = (next - x).norm();
    x = next;
    if (moved < tol) break;
  }
  return x;
}

/// argmin sum_i (0.5 x'Q_i x - c_i'x) = (sum Q_i)^{-1} sum c_i.
inline Eigen::VectorXd quadratic_consensus(const std::vector<arock::LocalQuadratic>& locals) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(locals[0].Q.rows(), locals[0].Q.cols());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(locals[0].c.size());
  for (const auto& f : locals) {
    Q += f.Q;
    c += f.c;
  }
  return Q.ldlt().solve(c);
}

/// Random SPD locals with curvatures in [0.5, 2].
inline std::vector<arock::LocalQuadratic> random_locals(std::size_t m, std::size_t d,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<arock::LocalQuadratic> out;
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::MatrixXd G(d, d);
    for (Eigen::Index a = 0; a < G.size(); ++a) G.data()[a] = normal(rng);
    Eigen::MatrixXd Q = 0.5 * Eigen::MatrixXd::Identity(d, d) + 0.3 * G * G.transpose() / static_cast<double>(d);
    Eigen::VectorXd c(d);
    for (Eigen::Index a = 0; a < c.size(); ++a) c[a] = normal(rng);
    out.push_back({Q, c});
  }
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace oracle
