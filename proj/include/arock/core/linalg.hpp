#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace arock {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> a);
double norm(std::span<const double> a);
double dist_sq(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

/// Writes the image of the first argument into the second.
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct PowerResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest singular value of a map given itself and its adjoint, by power
/// iteration on the normal map. Stops when the relative change drops below
/// `tol` or after `max_iter` steps.
PowerResult spectral_norm(const LinearMap& apply, const LinearMap& apply_adjoint,
                          std::size_t in_dim, std::size_t out_dim, double tol,
                          std::size_t max_iter, std::uint64_t seed = 1);

}  // namespace arock
