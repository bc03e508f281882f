#include "arock/core/update.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arock {

Vec km_step(std::span<const double> x, double alpha, const ProblemOperator& op) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("km_step: alpha must lie in (0, 1]");
  if (!all_finite(x)) throw std::invalid_argument("km_step: x contains non-finite entries");
  const Vec s = op.apply_S(x);
  if (!all_finite(s)) throw std::runtime_error("km_step: S x is not finite");
  Vec out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= alpha * s[j];
  return out;
}

void block_step_delta(const ProblemOperator& op, std::size_t block, const StateView& xhat,
                      const StateView& aux_hat, double eta, const SamplingDistribution& probs,
                      std::span<double> delta) {
  op.eval_S_block(block, xhat, aux_hat, delta);
  const double scale =
      eta / (static_cast<double>(probs.size()) * probs.p(block));
  for (double& d : delta) d = -(scale * d);
}

Vec arock_update(std::span<const double> x, std::span<const double> xhat, std::size_t block,
                 double eta, const SamplingDistribution& probs, const ProblemOperator& op) {
  if (block >= op.num_blocks())
    throw std::out_of_range("arock_update: block " + std::to_string(block) + " out of range");
  if (!(eta > 0.0)) throw std::invalid_argument("arock_update: eta must be positive");
  if (probs.size() != op.num_blocks())
    throw std::invalid_argument("arock_update: distribution size does not match block count");
  if (x.size() != op.dim() || xhat.size() != op.dim())
    throw std::invalid_argument("arock_update: dimension mismatch");

  const auto& lay = op.layout();
  Vec xhat_local;
  std::span<const double> read = xhat;
  if (op.own_block_fresh()) {
    xhat_local.assign(xhat.begin(), xhat.end());
    for (std::size_t j = lay.begin(block); j < lay.end(block); ++j) xhat_local[j] = x[j];
    read = xhat_local;
  }
  const Vec aux = op.make_aux(read);
  Vec delta(lay.size(block));
  block_step_delta(op, block, StateView(read), StateView(aux), eta, probs, delta);

  Vec out(x.begin(), x.end());
  for (std::size_t t = 0; t < delta.size(); ++t) out[lay.begin(block) + t] += delta[t];
  return out;
}

Vec sync_sweep(std::span<const double> x, double eta, const ProblemOperator& op) {
  const Vec s = op.apply_S(x);
  Vec out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= eta * s[j];
  return out;
}

SerialSolve solve_fixed_point(const ProblemOperator& op, std::span<const double> x0, double alpha,
                              double tol, std::size_t max_iter) {
  SerialSolve res;
  res.x.assign(x0.begin(), x0.end());
  Vec s(op.dim());
  for (std::size_t it = 0; it < max_iter; ++it) {
    op.eval_S_full(res.x, s);
    res.residual = norm(s);
    res.iterations = it;
    if (!std::isfinite(res.residual)) break;
    if (res.residual <= tol) {
      res.converged = true;
      return res;
    }
    for (std::size_t j = 0; j < s.size(); ++j) res.x[j] -= alpha * s[j];
  }
  op.eval_S_full(res.x, s);
  res.residual = norm(s);
  res.converged = res.residual <= tol;
  return res;
}

}  // namespace arock
