#pragma once

#include <variant>
#include <vector>

#include "arock/core/operator.hpp"

namespace arock {

/// {v : a'v <= beta}
struct Halfspace {
  Vec a;
  double beta = 0.0;
};

/// {v : lo <= v <= hi}
struct Box {
  Vec lo;
  Vec hi;
};

using ConvexSet = std::variant<Halfspace, Box>;

std::size_t set_dim(const ConvexSet& c);
/// Euclidean projection of v onto c, written to `out`.
void project(const ConvexSet& c, std::span<const double> v, std::span<double> out);
/// Distance from v to c.
double set_distance(const ConvexSet& c, std::span<const double> v);

/// Peaceman-Rachford splitting for finding a point in C_1 ∩ ... ∩ C_m.
/// Agent i owns a copy z_i in R^d; the running mean zbar is the auxiliary
/// cache, and (S z)_i = 2 (zbar - Proj_{C_i}(2 zbar - z_i)). The solution is
/// recovered as the mean of z at the fixed point.
class PrsFeasibilityOp final : public ProblemOperator {
 public:
  explicit PrsFeasibilityOp(std::vector<ConvexSet> sets);

  std::string name() const override { return "prs-feasibility"; }
  const BlockLayout& layout() const override { return layout_; }
  std::size_t aux_dim() const override { return d_; }
  void init_aux(std::span<const double> z, std::span<double> aux) const override;
  void aux_delta(std::size_t block, std::span<const double> delta,
                 const AuxSink& aux) const override;
  void eval_S_block(std::size_t block, const StateView& z, const StateView& aux,
                    std::span<double> out) const override;

  std::size_t point_dim() const { return d_; }
  const std::vector<ConvexSet>& sets() const { return sets_; }
  /// Mean of the copies.
  Vec recover(std::span<const double> z) const;
  /// Largest distance from v to any of the sets.
  double max_violation(std::span<const double> v) const;

 private:
  std::vector<ConvexSet> sets_;
  std::size_t d_ = 0;
  BlockLayout layout_;
};

/// Increment for z_i under the plain (uniform) schedule:
/// 2 eta (Proj_{C_i}(2 zbar - z_i) - zbar).
Vec prs_block(const PrsFeasibilityOp& op, std::size_t block, std::span<const double> zhat_i,
              std::span<const double> zbar_hat, double eta);

}  // namespace arock
