#include "arock/core/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arock {

CocoercivityReport check_cocoercivity(const ProblemOperator& op, std::size_t samples, Rng& rng,
                                      double scale, double tol, std::span<const double> center) {
  if (samples == 0) throw std::invalid_argument("check_cocoercivity: samples must be >= 1");
  const std::size_t n = op.dim();
  if (!center.empty() && center.size() != n)
    throw std::invalid_argument("check_cocoercivity: center has wrong size");
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u01;

  CocoercivityReport rep;
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_scaled_margin = std::numeric_limits<double>::infinity();
  Vec x(n), y(n), sx(n), sy(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const bool close = (s % 2) == 1;
    const double gap = close ? scale * std::pow(10.0, -3.0 * u01(rng)) : scale;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = center.empty() ? 0.0 : center[j];
      x[j] = c + scale * gauss(rng);
      y[j] = close ? x[j] + gap * gauss(rng) : c + scale * gauss(rng);
    }
    op.eval_S_full(x, sx);
    op.eval_S_full(y, sy);
    double inner = 0.0, ds = 0.0, dx = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = x[j] - y[j];
      const double b = sx[j] - sy[j];
      inner += a * b;
      ds += b * b;
      dx += a * a;
    }
    const double margin = inner - 0.5 * ds;
    const double scaled = margin / (1.0 + dx);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    rep.worst_scaled_margin = std::min(rep.worst_scaled_margin, scaled);
    if (!(margin >= -tol * (1.0 + dx))) ++rep.violations;
  }
  return rep;
}

ContractionReport measure_contraction(const ProblemOperator& op, std::span<const double> x_star,
                                      std::size_t samples, Rng& rng, double scale) {
  const std::size_t n = op.dim();
  if (x_star.size() != n) throw std::invalid_argument("measure_contraction: x* has wrong size");
  std::normal_distribution<double> gauss;
  ContractionReport rep;
  rep.samples = samples;
  Vec x(n);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < n; ++j) x[j] = x_star[j] + scale * gauss(rng);
    const Vec tx = op.apply_T(x);
    const double f = std::sqrt(dist_sq(tx, x_star) / dist_sq(x, x_star));
    rep.max_factor = std::max(rep.max_factor, f);
    total += f;
  }
  rep.mean_factor = samples ? total / static_cast<double>(samples) : 0.0;
  return rep;
}

}  // namespace arock
