#include "arock/ops/simple.hpp"

#include <stdexcept>

namespace arock {

ScaledIdentityOp::ScaledIdentityOp(std::size_t n, double scale)
    : layout_(BlockLayout::scalar(n)), scale_(scale) {}

void ScaledIdentityOp::eval_S_block(std::size_t block, const StateView& x, const StateView&,
                                    std::span<double> out) const {
  out[0] = x[block] - scale_ * x[block];
}

HalfspaceProjectionOp::HalfspaceProjectionOp(Vec a, double beta)
    : layout_(BlockLayout::scalar(a.size())), a_(std::move(a)), beta_(beta) {
  a_norm_sq_ = norm_sq(a_);
  if (!(a_norm_sq_ > 0.0)) throw std::invalid_argument("HalfspaceProjectionOp: zero normal");
}

void HalfspaceProjectionOp::eval_S_block(std::size_t block, const StateView& x, const StateView&,
                                         std::span<double> out) const {
  double ax = 0.0;
  for (std::size_t j = 0; j < a_.size(); ++j) ax += a_[j] * x[j];
  const double excess = ax - beta_;
  out[0] = excess > 0.0 ? excess / a_norm_sq_ * a_[block] : 0.0;
}

}  // namespace arock
