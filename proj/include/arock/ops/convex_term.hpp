#pragma once

#include <Eigen/Dense>
#include <variant>

namespace arock {

/// 0.5 v'Pv + q'v with P symmetric positive semidefinite.
struct QuadraticTerm {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
};

/// lambda * |v|_1 on `dim` coordinates.
struct L1Term {
  double lambda = 0.0;
  std::size_t dim = 0;
};

/// Indicator of lo <= v <= hi.
struct BoxTerm {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct ZeroTerm {
  std::size_t dim = 0;
};

using ConvexTerm = std::variant<QuadraticTerm, L1Term, BoxTerm, ZeroTerm>;

std::size_t term_dim(const ConvexTerm& h);
/// Value of h at v; +inf outside a box.
double term_value(const ConvexTerm& h, const Eigen::VectorXd& v);
/// prox_{t h}(u) for the separable terms (L1, Box, Zero).
Eigen::VectorXd separable_prox(const ConvexTerm& h, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& t);

double soft_threshold(double u, double t);

struct SubproblemResult {
  Eigen::VectorXd v;
  double residual = 0.0;
};

/// Minimizer of h(v) - <z, Mv - r> + (gamma/2) |Mv - r|^2 as z varies.
///
/// Quadratic h is solved through a cached LDL^T factorization of
/// P + gamma M'M. Separable h with a diagonal M has a closed form. Any other
/// combination falls back to an accelerated proximal-gradient loop run until
/// the prox-gradient residual is below `tol`; failure throws with the
/// residual reached.
class SubproblemSolver {
 public:
  SubproblemSolver(ConvexTerm h, Eigen::MatrixXd M, Eigen::VectorXd r, double gamma,
                   double tol = 1e-10);

  SubproblemResult solve(const Eigen::VectorXd& z) const;

  /// Optimality residual of v for the given z.
  double residual(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const;

  const Eigen::MatrixXd& M() const { return M_; }
  const Eigen::VectorXd& r() const { return r_; }
  double gamma() const { return gamma_; }
  const ConvexTerm& term() const { return h_; }

 private:
  enum class Mode { quadratic, diagonal, iterative };

  Eigen::VectorXd smooth_grad(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const;

  ConvexTerm h_;
  Eigen::MatrixXd M_;
  Eigen::VectorXd r_;
  double gamma_;
  double tol_;
  Mode mode_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Eigen::MatrixXd K_;
  Eigen::VectorXd diag_;
  double lipschitz_ = 0.0;
};

}  // namespace arock
