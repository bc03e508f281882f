#include "arock/ops/prs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arock {

std::size_t set_dim(const ConvexSet& c) {
  if (const auto* h = std::get_if<Halfspace>(&c)) return h->a.size();
  return std::get<Box>(c).lo.size();
}

void project(const ConvexSet& c, std::span<const double> v, std::span<double> out) {
  if (const auto* h = std::get_if<Halfspace>(&c)) {
    const double excess = dot(h->a, v) - h->beta;
    const double t = excess > 0.0 ? excess / norm_sq(h->a) : 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] - t * h->a[j];
    return;
  }
  const auto& b = std::get<Box>(c);
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::clamp(v[j], b.lo[j], b.hi[j]);
}

double set_distance(const ConvexSet& c, std::span<const double> v) {
  Vec p(v.size());
  project(c, v, p);
  return std::sqrt(dist_sq(v, p));
}

PrsFeasibilityOp::PrsFeasibilityOp(std::vector<ConvexSet> sets) : sets_(std::move(sets)) {
  if (sets_.empty()) throw std::invalid_argument("PrsFeasibilityOp: no sets");
  d_ = set_dim(sets_[0]);
  if (d_ == 0) throw std::invalid_argument("PrsFeasibilityOp: zero-dimensional sets");
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (set_dim(sets_[i]) != d_)
      throw std::invalid_argument("PrsFeasibilityOp: set " + std::to_string(i) +
                                  " has a different dimension");
    if (const auto* h = std::get_if<Halfspace>(&sets_[i])) {
      if (!(norm_sq(h->a) > 0.0))
        throw std::invalid_argument("PrsFeasibilityOp: halfspace " + std::to_string(i) +
                                    " has zero normal");
    } else {
      const auto& b = std::get<Box>(sets_[i]);
      if (b.hi.size() != d_) throw std::invalid_argument("PrsFeasibilityOp: box bound size");
      for (std::size_t j = 0; j < d_; ++j)
        if (!(b.lo[j] <= b.hi[j]))
          throw std::invalid_argument("PrsFeasibilityOp: empty box " + std::to_string(i));
    }
  }
  layout_ = BlockLayout::uniform(sets_.size(), d_);
}

void PrsFeasibilityOp::init_aux(std::span<const double> z, std::span<double> aux) const {
  std::fill(aux.begin(), aux.end(), 0.0);
  for (std::size_t i = 0; i < sets_.size(); ++i)
    for (std::size_t j = 0; j < d_; ++j) aux[j] += z[i * d_ + j];
  const double inv_m = 1.0 / static_cast<double>(sets_.size());
  for (double& v : aux) v *= inv_m;
}

void PrsFeasibilityOp::aux_delta(std::size_t, std::span<const double> delta,
                                 const AuxSink& aux) const {
  const double inv_m = 1.0 / static_cast<double>(sets_.size());
  for (std::size_t j = 0; j < d_; ++j) aux.add(j, delta[j] * inv_m);
}

void PrsFeasibilityOp::eval_S_block(std::size_t block, const StateView& z, const StateView& aux,
                                    std::span<double> out) const {
  Vec reflected(d_), zbar(d_);
  for (std::size_t j = 0; j < d_; ++j) {
    zbar[j] = aux[j];
    reflected[j] = 2.0 * zbar[j] - z[block * d_ + j];
  }
  project(sets_[block], reflected, out);
  for (std::size_t j = 0; j < d_; ++j) out[j] = 2.0 * (zbar[j] - out[j]);
}

Vec PrsFeasibilityOp::recover(std::span<const double> z) const {
  check_dim(z.size(), "z");
  Vec mean(d_);
  init_aux(z, mean);
  return mean;
}

double PrsFeasibilityOp::max_violation(std::span<const double> v) const {
  double worst = 0.0;
  for (const auto& c : sets_) worst = std::max(worst, set_distance(c, v));
  return worst;
}

Vec prs_block(const PrsFeasibilityOp& op, std::size_t block, std::span<const double> zhat_i,
              std::span<const double> zbar_hat, double eta) {
  const std::size_t d = op.point_dim();
  if (block >= op.num_blocks()) throw std::out_of_range("prs_block: block out of range");
  if (zhat_i.size() != d || zbar_hat.size() != d)
    throw std::invalid_argument("prs_block: dimension mismatch");
  Vec reflected(d), out(d);
  for (std::size_t j = 0; j < d; ++j) reflected[j] = 2.0 * zbar_hat[j] - zhat_i[j];
  project(op.sets()[block], reflected, out);
  for (std::size_t j = 0; j < d; ++j) out[j] = 2.0 * eta * (out[j] - zbar_hat[j]);
  return out;
}

}  // namespace arock
