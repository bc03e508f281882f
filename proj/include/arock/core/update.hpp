#pragma once

#include <cstddef>
#include <span>

#include "arock/core/linalg.hpp"
#include "arock/core/operator.hpp"
#include "arock/core/sampling.hpp"

namespace arock {

/// x - alpha * S x. alpha must lie in (0, 1].
Vec km_step(std::span<const double> x, double alpha, const ProblemOperator& op);

/// Increment for block i: -(eta / (m p_i)) (S xhat)_i, written to `delta`.
/// Shared by the simulator and the engine so that both produce identical
/// floating-point results for identical reads.
void block_step_delta(const ProblemOperator& op, std::size_t block, const StateView& xhat,
                      const StateView& aux_hat, double eta, const SamplingDistribution& probs,
                      std::span<double> delta);

/// Returns x with block i replaced by x_i - (eta / (m p_i)) (S xhat)_i.
/// Every other entry is copied unchanged.
Vec arock_update(std::span<const double> x, std::span<const double> xhat, std::size_t block,
                 double eta, const SamplingDistribution& probs, const ProblemOperator& op);

/// All blocks read the same x and update together: x - eta * S x.
Vec sync_sweep(std::span<const double> x, double eta, const ProblemOperator& op);

struct SerialSolve {
  Vec x;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Plain KM iteration until |S x| <= tol; serves as a fixed-point oracle.
SerialSolve solve_fixed_point(const ProblemOperator& op, std::span<const double> x0, double alpha,
                              double tol, std::size_t max_iter);

}  // namespace arock
