#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "arock/core/linalg.hpp"

namespace arock {

/// Weight matrix of the xi metric: a symmetric (tau+1) x (tau+1) tridiagonal
/// matrix M' acting on (x^k - x*, x^{k-1} - x*, ..., x^{k-tau} - x*).
struct FejerMetricSpec {
  std::size_t tau = 0;
  double p_min = 1.0;

  FejerMetricSpec(std::size_t tau_, double p_min_);

  /// sqrt(p_min) * [1/sqrt(p_min) + tau, 2tau - 1, 2tau - 3, ..., 1]
  std::vector<double> diagonal() const;
  /// -sqrt(p_min) * [tau, tau - 1, ..., 1]
  std::vector<double> off_diagonal() const;
  /// Smallest eigenvalue (dense symmetric solve).
  double min_eigenvalue() const;
  /// Eigenvalue floor check for tau <= 64, LDL^T pivots beyond that.
  bool is_positive_definite() const;
  /// Y^T (M' kron I) Y for Y = (x^k - x*, ..., x^{k-tau} - x*).
  double quadratic_form(std::span<const Vec> newest_first, std::span<const double> x_star) const;
};

/// xi_k(x*) = |x^k - x*|^2 + sqrt(p_min) sum_{i=k-tau}^{k-1} (i - (k - tau) + 1) |x^i - x^{i+1}|^2.
/// `window` holds x^{k-tau}, ..., x^k, oldest first (tau + 1 entries).
double xi_metric(std::span<const Vec> window, std::span<const double> x_star, double p_min,
                 std::size_t tau);

/// Same quantity from |x^k - x*|^2 and the squared step norms
/// |x^{k-tau} - x^{k-tau+1}|^2, ..., |x^{k-1} - x^k|^2 (oldest first).
double xi_metric_from_steps(double dist_sq_now, std::span<const double> step_sq_oldest_first,
                            double p_min);

}  // namespace arock
