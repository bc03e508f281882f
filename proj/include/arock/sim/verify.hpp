#pragma once

#include <vector>

#include "arock/core/step_size.hpp"
#include "arock/sim/simulator.hpp"

namespace arock {

/// One step of the fundamental-inequality check:
///   E[xi_{k+1} | past] + coefficient * |xbar - x^k|^2 <= xi_k,
/// with xbar = x^k - eta S xhat^k. margin = xi_k - (left-hand side).
struct InequalityStep {
  std::int64_t k = 0;
  double xi = 0.0;
  double expected_lhs = 0.0;
  double gap_sq = 0.0;  ///< |xbar - x^k|^2
  double margin = 0.0;
  double std_error = 0.0;
  bool violated = false;
};

struct InequalityReport {
  /// (1/m)(1/eta - 2 tau / (m sqrt(p_min)) - 1 / (m p_min))
  double coefficient = 0.0;
  /// False when the coefficient is negative: the inequality then carries no
  /// decrease guarantee.
  bool guaranteed = true;
  bool exact = false;  ///< all blocks enumerated instead of sampled
  std::size_t violations = 0;
  /// min over steps of margin / allowance; a step is violated below -1.
  double worst_margin_ratio = 0.0;
  std::vector<InequalityStep> steps;
  bool passed() const { return violations == 0; }
};

/// Walks the trajectory of `cfg` for `steps` steps and, at each one, freezes
/// the state and evaluates the conditional expectation over the next block:
/// exactly (every block weighted by p) when m <= `exact_limit`, otherwise by
/// `trials` independent draws. A step is violated when its margin is below
/// -3 standard errors (less a 1e-9 relative round-off allowance). Throws when
/// trials < 30.
InequalityReport verify_fundamental_inequality(const SimRun& cfg, std::span<const double> x_star,
                                               std::size_t trials, std::size_t steps,
                                               std::size_t exact_limit = 1000);

struct LinearRateReport {
  LinearRateSteps bounds;
  double eta = 0.0;
  std::size_t seeds = 0;
  std::vector<std::size_t> ks;        ///< logged step counts
  std::vector<double> mean_dist_sq;   ///< mean |x^k - x*|^2 across seeds
  std::vector<double> std_error;
  std::vector<double> envelope;       ///< (1 - beta mu eta / m)^k |x^0 - x*|^2
  double worst_ratio = 0.0;           ///< max mean / envelope
  double slack = 0.0;
  bool passed() const { return worst_ratio <= 1.0 + slack; }
};

/// Runs `seeds` independent trajectories (seeds cfg.seed, cfg.seed + 1, ...)
/// and compares the mean squared error at every epoch with the linear-rate
/// envelope. The step must not exceed min(eta1, eta2); rho = 0 selects the
/// default. Throws on mu <= 0.
LinearRateReport verify_linear_rate(const SimRun& cfg, std::span<const double> x_star, double mu,
                                    double beta, std::size_t seeds, double slack = 0.05,
                                    double rho = 0.0);

}  // namespace arock
