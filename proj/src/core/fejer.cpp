#include "arock/core/fejer.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace arock {

FejerMetricSpec::FejerMetricSpec(std::size_t tau_, double p_min_) : tau(tau_), p_min(p_min_) {
  if (!(p_min > 0.0 && p_min <= 1.0))
    throw std::invalid_argument("FejerMetricSpec: p_min must lie in (0, 1]");
}

std::vector<double> FejerMetricSpec::diagonal() const {
  const double sp = std::sqrt(p_min);
  const double t = static_cast<double>(tau);
  std::vector<double> d(tau + 1);
  d[0] = sp * (1.0 / sp + t);
  for (std::size_t j = 1; j < tau; ++j) d[j] = sp * (2.0 * (t - static_cast<double>(j)) + 1.0);
  if (tau > 0) d[tau] = sp;
  return d;
}

std::vector<double> FejerMetricSpec::off_diagonal() const {
  const double sp = std::sqrt(p_min);
  std::vector<double> e(tau);
  for (std::size_t j = 0; j < tau; ++j) e[j] = -sp * static_cast<double>(tau - j);
  return e;
}

double FejerMetricSpec::min_eigenvalue() const {
  const auto d = diagonal();
  const auto e = off_diagonal();
  const Eigen::Index n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) M(i, i) = d[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) M(i, i + 1) = M(i + 1, i) = e[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

bool FejerMetricSpec::is_positive_definite() const {
  if (tau <= 64) return min_eigenvalue() > 0.0;
  const auto d = diagonal();
  const auto e = off_diagonal();
  double pivot = d[0];
  if (!(pivot > 0.0)) return false;
  for (std::size_t j = 1; j < d.size(); ++j) {
    pivot = d[j] - e[j - 1] * e[j - 1] / pivot;
    if (!(pivot > 0.0)) return false;
  }
  return true;
}

double FejerMetricSpec::quadratic_form(std::span<const Vec> newest_first,
                                       std::span<const double> x_star) const {
  if (newest_first.size() != tau + 1)
    throw std::invalid_argument("quadratic_form: need tau + 1 iterates");
  const auto d = diagonal();
  const auto e = off_diagonal();
  const std::size_t n = x_star.size();
  double total = 0.0;
  for (std::size_t a = 0; a <= tau; ++a) {
    double self = 0.0, cross = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ya = newest_first[a][j] - x_star[j];
      self += ya * ya;
      if (a < tau) cross += ya * (newest_first[a + 1][j] - x_star[j]);
    }
    total += d[a] * self;
    if (a < tau) total += 2.0 * e[a] * cross;
  }
  return total;
}

double xi_metric(std::span<const Vec> window, std::span<const double> x_star, double p_min,
                 std::size_t tau) {
  if (window.size() < tau + 1)
    throw std::invalid_argument("xi_metric: history holds " + std::to_string(window.size()) +
                                " iterates, need tau + 1 = " + std::to_string(tau + 1));
  const std::size_t base = window.size() - (tau + 1);
  std::vector<double> steps(tau);
  for (std::size_t t = 0; t < tau; ++t)
    steps[t] = dist_sq(window[base + t], window[base + t + 1]);
  return xi_metric_from_steps(dist_sq(window.back(), x_star), steps, p_min);
}

double xi_metric_from_steps(double dist_sq_now, std::span<const double> step_sq_oldest_first,
                            double p_min) {
  double weighted = 0.0;
  for (std::size_t t = 0; t < step_sq_oldest_first.size(); ++t)
    weighted += static_cast<double>(t + 1) * step_sq_oldest_first[t];
  return dist_sq_now + std::sqrt(p_min) * weighted;
}

}  // namespace arock
