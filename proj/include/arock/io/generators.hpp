#pragma once

#include <cstdint>

#include "arock/core/block_layout.hpp"
#include "arock/core/linalg.hpp"
#include "arock/io/libsvm.hpp"
#include "arock/io/sparse.hpp"

namespace arock {

/// About `block_target` contiguous features per block: round(n / target)
/// blocks whose sizes differ by at most one, larger blocks first.
BlockLayout partition_blocks(std::size_t n, std::size_t block_target = 50);

struct LinearSystem {
  SparseMatrixCSR A;
  Vec b;
  Vec x_star;
};

/// Symmetric banded system with off-diagonals drawn from -U(0.1, 1) and a
/// constant diagonal equal to (largest off-diagonal row sum) / dominance.
/// Every row is strictly diagonally dominant, so the Jacobi iteration
/// matrix has spectral norm at most `dominance` < 1. x* is standard normal
/// and b = A x*.
LinearSystem gen_diag_dominant(std::size_t n, std::size_t bandwidth, std::uint64_t seed,
                               double dominance = 0.5);

struct LogisticDataOptions {
  std::size_t samples = 200;
  std::size_t features = 100;
  double density = 0.1;
  std::uint64_t seed = 1;
  /// Features [0, dense_block_size) are sampled `dense_multiplier` times more
  /// often than the rest (capped at probability one).
  std::size_t dense_block_size = 0;
  double dense_multiplier = 1.0;
};

/// Random sparse samples with unit-norm rows; labels are the sign of a
/// noisy linear score against a sparse planted model.
LabeledDataset gen_logistic_dataset(const LogisticDataOptions& opt);

}  // namespace arock
