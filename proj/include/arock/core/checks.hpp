#pragma once

#include <cstddef>
#include <span>

#include "arock/core/operator.hpp"
#include "arock/core/sampling.hpp"

namespace arock {

struct CocoercivityReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// min over pairs of <x - y, Sx - Sy> - 0.5 |Sx - Sy|^2
  double worst_margin = 0.0;
  /// min over pairs of the margin divided by (1 + |x - y|^2)
  double worst_scaled_margin = 0.0;
  bool passed() const { return violations == 0; }
};

/// Samples random pairs around `center` (zero if empty) with Gaussian spread
/// `scale`, half of them as close pairs. A pair violates when the margin
/// drops below -tol * (1 + |x - y|^2).
CocoercivityReport check_cocoercivity(const ProblemOperator& op, std::size_t samples, Rng& rng,
                                      double scale = 1.0, double tol = 1e-9,
                                      std::span<const double> center = {});

struct ContractionReport {
  std::size_t samples = 0;
  double max_factor = 0.0;
  double mean_factor = 0.0;
};

/// |T x - x*| / |x - x*| for random x = x* + scale * gaussian.
ContractionReport measure_contraction(const ProblemOperator& op, std::span<const double> x_star,
                                      std::size_t samples, Rng& rng, double scale = 1.0);

}  // namespace arock
