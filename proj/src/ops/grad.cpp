#include "arock/ops/grad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arock {
namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double term_slope(const SparseTerm& t, double u) {
  if (t.loss == SparseTerm::Loss::squared) return u - t.target;
  return -t.target * sigmoid(-t.target * u);
}

double term_value(const SparseTerm& t, double u) {
  if (t.loss == SparseTerm::Loss::squared) return 0.5 * (u - t.target) * (u - t.target);
  return softplus(-t.target * u);
}

}  // namespace

GradOp GradOp::quadratic(SparseMatrixCSR A, Vec b, BlockLayout layout, double L) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("GradOp: A must be square");
  if (b.size() != n) throw std::invalid_argument("GradOp: b has wrong size");
  GradOp op;
  if (layout.num_blocks() == 0) layout = BlockLayout::scalar(n);
  if (layout.dim() != n) throw std::invalid_argument("GradOp: layout does not match A");
  if (!(L > 0.0)) L = spectral_norm(A, 100000, 1e-12) * (1.0 + 1e-6);
  if (!(L > 0.0)) throw std::invalid_argument("GradOp: A is zero");
  op.family_ = Quadratic{std::move(A), std::move(b)};
  op.layout_ = std::move(layout);
  op.L_ = L;
  return op;
}

GradOp GradOp::sparse_sum(std::size_t n, std::vector<SparseTerm> terms, BlockLayout layout,
                          double L) {
  GradOp op;
  if (layout.num_blocks() == 0) layout = BlockLayout::scalar(n);
  if (layout.dim() != n) throw std::invalid_argument("GradOp: layout does not match n");
  SparseSum fam;
  fam.by_coord.resize(n);
  double bound = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    if (term.idx.size() != term.coef.size())
      throw std::invalid_argument("GradOp: term " + std::to_string(t) + " has mismatched support");
    double sq = 0.0;
    for (std::size_t k = 0; k < term.idx.size(); ++k) {
      if (term.idx[k] >= n) throw std::invalid_argument("GradOp: term index out of range");
      fam.by_coord[term.idx[k]].emplace_back(t, term.coef[k]);
      sq += term.coef[k] * term.coef[k];
    }
    bound += (term.loss == SparseTerm::Loss::squared ? 1.0 : 0.25) * sq;
  }
  if (!(L > 0.0)) L = bound;
  if (!(L > 0.0)) throw std::invalid_argument("GradOp: objective has no curvature bound");
  fam.terms = std::move(terms);
  op.family_ = std::move(fam);
  op.layout_ = std::move(layout);
  op.L_ = L;
  return op;
}

double GradOp::partial(std::size_t coord, const StateView& x) const {
  if (const auto* q = std::get_if<Quadratic>(&family_)) {
    double s = 0.0;
    for (std::size_t k = q->A.row_begin(coord); k < q->A.row_end(coord); ++k)
      s += q->A.values()[k] * x[q->A.col_idx()[k]];
    return s - q->b[coord];
  }
  const auto& fam = std::get<SparseSum>(family_);
  double g = 0.0;
  for (const auto& [t, a] : fam.by_coord[coord]) {
    const auto& term = fam.terms[t];
    double u = 0.0;
    for (std::size_t k = 0; k < term.idx.size(); ++k) u += term.coef[k] * x[term.idx[k]];
    g += term_slope(term, u) * a;
  }
  return g;
}

void GradOp::eval_S_block(std::size_t block, const StateView& x, const StateView&,
                          std::span<double> out) const {
  const double scale = 2.0 / L_;
  const std::size_t first = layout_.begin(block);
  for (std::size_t c = first; c < layout_.end(block); ++c) {
    const double g = partial(c, x);
    if (!std::isfinite(g))
      throw std::runtime_error("GradOp: non-finite gradient at coordinate " + std::to_string(c));
    out[c - first] = scale * g;
  }
}

Vec GradOp::gradient(std::span<const double> x) const {
  Vec g(layout_.dim());
  const StateView xv(x);
  for (std::size_t c = 0; c < g.size(); ++c) g[c] = partial(c, xv);
  return g;
}

std::optional<double> GradOp::objective(std::span<const double> x) const {
  if (const auto* q = std::get_if<Quadratic>(&family_)) {
    const Vec ax = q->A.multiply(x);
    return 0.5 * dot(x, ax) - dot(q->b, x);
  }
  const auto& fam = std::get<SparseSum>(family_);
  double f = 0.0;
  for (const auto& term : fam.terms) {
    double u = 0.0;
    for (std::size_t k = 0; k < term.idx.size(); ++k) u += term.coef[k] * x[term.idx[k]];
    f += term_value(term, u);
  }
  return f;
}

Vec grad_block(const GradOp& op, std::size_t block, std::span<const double> xhat) {
  return op.apply_S_block(block, xhat);
}

}  // namespace arock
