#include "arock/io/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace arock {

BlockLayout partition_blocks(std::size_t n, std::size_t block_target) {
  if (n == 0) throw std::invalid_argument("partition_blocks: n must be positive");
  if (block_target == 0) throw std::invalid_argument("partition_blocks: target must be positive");
  const std::size_t k =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                   static_cast<double>(n) / static_cast<double>(block_target))));
  const std::size_t base = n / k, extra = n % k;
  std::vector<std::size_t> sizes(k, base);
  for (std::size_t i = 0; i < extra; ++i) ++sizes[i];
  return BlockLayout::from_sizes(sizes);
}

LinearSystem gen_diag_dominant(std::size_t n, std::size_t bandwidth, std::uint64_t seed,
                               double dominance) {
  if (n == 0) throw std::invalid_argument("gen_diag_dominant: n must be positive");
  if (!(dominance > 0.0 && dominance < 1.0))
    throw std::invalid_argument("gen_diag_dominant: dominance must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  std::normal_distribution<double> gauss;

  std::vector<Triplet> entries;
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n && j <= i + bandwidth; ++j) {
      const double v = -mag(rng);
      entries.push_back({i, j, v});
      entries.push_back({j, i, v});
      row_sum[i] += -v;
      row_sum[j] += -v;
    }
  const double widest = *std::max_element(row_sum.begin(), row_sum.end());
  const double diag = widest > 0.0 ? widest / dominance : 1.0;
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, diag});

  LinearSystem sys;
  sys.A = SparseMatrixCSR::from_triplets(n, n, std::move(entries));
  sys.x_star.resize(n);
  for (auto& v : sys.x_star) v = gauss(rng);
  sys.b = sys.A.multiply(sys.x_star);
  return sys;
}

LabeledDataset gen_logistic_dataset(const LogisticDataOptions& opt) {
  if (opt.samples == 0 || opt.features == 0)
    throw std::invalid_argument("gen_logistic_dataset: empty shape");
  if (!(opt.density > 0.0 && opt.density <= 1.0))
    throw std::invalid_argument("gen_logistic_dataset: density must lie in (0, 1]");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u01;
  std::normal_distribution<double> gauss;

  Vec planted(opt.features, 0.0);
  for (auto& w : planted)
    if (u01(rng) < 0.2) w = gauss(rng);

  std::vector<std::size_t> row_ptr{0}, col_idx;
  std::vector<double> values, labels;
  for (std::size_t r = 0; r < opt.samples; ++r) {
    const std::size_t start = col_idx.size();
    for (std::size_t c = 0; c < opt.features; ++c) {
      const double p = c < opt.dense_block_size
                           ? std::min(1.0, opt.density * opt.dense_multiplier)
                           : opt.density;
      if (u01(rng) < p) {
        col_idx.push_back(c);
        values.push_back(gauss(rng));
      }
    }
    if (col_idx.size() == start) {
      std::uniform_int_distribution<std::size_t> pick(0, opt.features - 1);
      col_idx.push_back(pick(rng));
      values.push_back(1.0);
    }
    double nrm = 0.0, score = 0.0;
    for (std::size_t k = start; k < col_idx.size(); ++k) nrm += values[k] * values[k];
    nrm = std::sqrt(nrm);
    for (std::size_t k = start; k < col_idx.size(); ++k) {
      values[k] /= nrm;
      score += values[k] * planted[col_idx[k]];
    }
    score += 0.1 * gauss(rng);
    labels.push_back(score >= 0.0 ? 1.0 : -1.0);
    row_ptr.push_back(col_idx.size());
  }

  LabeledDataset data;
  data.samples = SparseMatrixCSR(opt.samples, opt.features, std::move(row_ptr),
                                 std::move(col_idx), std::move(values));
  data.labels = std::move(labels);
  data.validate();
  return data;
}

}  // namespace arock
