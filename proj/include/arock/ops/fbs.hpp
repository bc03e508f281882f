#pragma once

#include <vector>

#include "arock/core/operator.hpp"
#include "arock/io/libsvm.hpp"
#include "arock/io/sparse.hpp"

namespace arock {

/// Forward-backward splitting for lambda |x|_1 + g(Ax) with g a sample
/// average (logistic or least squares):
///   (S x)_i = x_i - softthresh_{gamma lambda}(x_i - gamma grad_i g(x)).
/// The product Ax is kept as the auxiliary cache, so a block only walks its
/// own columns of A.
class FbsL1Op final : public ProblemOperator {
 public:
  enum class Loss { logistic, least_squares };

  /// (1/N) sum_j log(1 + exp(-b_j a_j'x)). L = |A|_2^2 / (4N), |A|_2 from 50
  /// power steps. gamma <= 0 selects 1.9 / L; gamma >= 2 / L throws.
  static FbsL1Op logistic(const LabeledDataset& data, double lambda, double gamma = 0.0,
                          BlockLayout layout = {});
  /// (1/2N) |Ax - y|^2. L and the strong convexity modulus are exact
  /// (dense eigensolve) up to 2000 features, power-method L beyond.
  static FbsL1Op least_squares(SparseMatrixCSR A, Vec y, double lambda, double gamma = 0.0,
                               BlockLayout layout = {});

  std::string name() const override {
    return loss_ == Loss::logistic ? "fbs-l1-logistic" : "fbs-l1-least-squares";
  }
  const BlockLayout& layout() const override { return layout_; }
  std::size_t aux_dim() const override { return A_.rows(); }
  void init_aux(std::span<const double> x, std::span<double> aux) const override;
  void aux_delta(std::size_t block, std::span<const double> delta,
                 const AuxSink& aux) const override;
  void eval_S_block(std::size_t block, const StateView& x, const StateView& aux,
                    std::span<double> out) const override;
  std::optional<double> objective(std::span<const double> x) const override;

  /// grad_c g given the cached product Ax.
  double partial(std::size_t coord, const StateView& Ax) const;
  /// Full gradient of the smooth part.
  Vec smooth_gradient(std::span<const double> x) const;

  Loss loss() const { return loss_; }
  double lipschitz() const { return L_; }
  /// Strong convexity modulus of g∘A; zero when unknown or absent.
  double strong_convexity() const { return mu_; }
  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }
  const SparseMatrixCSR& matrix() const { return A_; }
  /// Column view: row c lists the samples touching feature c.
  const SparseMatrixCSR& columns() const { return At_; }

 private:
  FbsL1Op(Loss loss, SparseMatrixCSR A, Vec targets, double lambda, BlockLayout layout);
  void set_gamma(double gamma);

  Loss loss_;
  SparseMatrixCSR A_;
  SparseMatrixCSR At_;
  Vec targets_;  ///< labels for logistic, y for least squares
  double lambda_;
  double gamma_ = 0.0;
  double L_ = 0.0;
  double mu_ = 0.0;
  double inv_n_ = 0.0;
  BlockLayout layout_;
};

/// (S xhat)_i for block i given the cache A xhat.
Vec fbs_block(const FbsL1Op& op, std::size_t block, std::span<const double> xhat,
              std::span<const double> Axhat);

}  // namespace arock
