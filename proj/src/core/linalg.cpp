#include "arock/core/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace arock {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

double dist_sq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dist_sq: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

PowerResult spectral_norm(const LinearMap& apply, const LinearMap& apply_adjoint,
                          std::size_t in_dim, std::size_t out_dim, double tol,
                          std::size_t max_iter, std::uint64_t seed) {
  PowerResult res;
  if (in_dim == 0) return res;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec v(in_dim), w(out_dim), u(in_dim);
  for (auto& e : v) e = gauss(rng);
  double nv = norm(v);
  for (auto& e : v) e /= nv;

  double lambda = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    apply(v, w);
    apply_adjoint(w, u);
    const double nu = norm(u);
    res.iterations = it;
    if (nu == 0.0) {
      lambda = 0.0;
      res.converged = true;
      break;
    }
    for (std::size_t i = 0; i < in_dim; ++i) v[i] = u[i] / nu;
    const bool done = std::abs(nu - lambda) <= tol * nu;
    lambda = nu;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.value = std::sqrt(lambda);
  return res;
}

}  // namespace arock
