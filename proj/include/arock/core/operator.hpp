#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arock/core/block_layout.hpp"
#include "arock/core/linalg.hpp"
#include "arock/core/state_view.hpp"

namespace arock {

/// A fixed-point problem x = Tx exposed through S = I - T.
///
/// Block kernels read the iterate through a StateView and, when the operator
/// keeps a linear auxiliary cache (Ax, a running mean, ...), through a second
/// view of that cache. The cache is a linear function of x; `aux_delta`
/// describes how it moves when block i moves by `delta`.
class ProblemOperator {
 public:
  virtual ~ProblemOperator() = default;

  virtual std::string name() const = 0;
  virtual const BlockLayout& layout() const = 0;

  std::size_t num_blocks() const { return layout().num_blocks(); }
  std::size_t dim() const { return layout().dim(); }
  std::vector<std::size_t> block_sizes() const;

  virtual std::size_t aux_dim() const { return 0; }
  virtual void init_aux(std::span<const double> x, std::span<double> aux) const;
  virtual void aux_delta(std::size_t block, std::span<const double> delta, const AuxSink& aux) const;

  /// True when the updating agent always sees its own block fresh.
  virtual bool own_block_fresh() const { return false; }

  /// (S x)_i written to `out` (size of block i).
  virtual void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                            std::span<double> out) const = 0;

  /// Full S x. The default assembles the block kernels on a fresh cache.
  virtual void eval_S_full(std::span<const double> x, std::span<double> out) const;

  virtual std::optional<double> objective(std::span<const double> x) const;

  Vec apply_S(std::span<const double> x) const;
  Vec apply_S_block(std::size_t block, std::span<const double> x) const;
  Vec apply_T(std::span<const double> x) const;
  Vec make_aux(std::span<const double> x) const;
  double fixed_point_residual(std::span<const double> x) const;

 protected:
  void check_block(std::size_t block) const;
  void check_dim(std::size_t n, const char* what) const;
};

}  // namespace arock
