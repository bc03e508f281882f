#include "arock/core/operator.hpp"

#include <stdexcept>

namespace arock {

std::vector<std::size_t> ProblemOperator::block_sizes() const {
  const auto& lay = layout();
  std::vector<std::size_t> sizes(lay.num_blocks());
  for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = lay.size(i);
  return sizes;
}

void ProblemOperator::init_aux(std::span<const double>, std::span<double>) const {}

void ProblemOperator::aux_delta(std::size_t, std::span<const double>, const AuxSink&) const {}

void ProblemOperator::eval_S_full(std::span<const double> x, std::span<double> out) const {
  check_dim(x.size(), "x");
  check_dim(out.size(), "out");
  const Vec aux = make_aux(x);
  const StateView xv(x), av(aux);
  const auto& lay = layout();
  for (std::size_t i = 0; i < lay.num_blocks(); ++i)
    eval_S_block(i, xv, av, out.subspan(lay.begin(i), lay.size(i)));
}

std::optional<double> ProblemOperator::objective(std::span<const double>) const {
  return std::nullopt;
}

Vec ProblemOperator::apply_S(std::span<const double> x) const {
  Vec out(dim());
  eval_S_full(x, out);
  return out;
}

Vec ProblemOperator::apply_S_block(std::size_t block, std::span<const double> x) const {
  check_block(block);
  check_dim(x.size(), "x");
  const Vec aux = make_aux(x);
  Vec out(layout().size(block));
  eval_S_block(block, StateView(x), StateView(aux), out);
  return out;
}

Vec ProblemOperator::apply_T(std::span<const double> x) const {
  Vec s = apply_S(x);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = x[j] - s[j];
  return s;
}

Vec ProblemOperator::make_aux(std::span<const double> x) const {
  Vec aux(aux_dim(), 0.0);
  if (!aux.empty()) init_aux(x, aux);
  return aux;
}

double ProblemOperator::fixed_point_residual(std::span<const double> x) const {
  return norm(apply_S(x));
}

void ProblemOperator::check_block(std::size_t block) const {
  if (block >= num_blocks())
    throw std::out_of_range(name() + ": block index " + std::to_string(block) +
                            " out of range (m = " + std::to_string(num_blocks()) + ")");
}

void ProblemOperator::check_dim(std::size_t n, const char* what) const {
  if (n != dim())
    throw std::invalid_argument(name() + ": " + what + " has size " + std::to_string(n) +
                                ", expected " + std::to_string(dim()));
}

}  // namespace arock
