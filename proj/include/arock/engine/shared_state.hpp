#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "arock/core/block_layout.hpp"
#include "arock/core/linalg.hpp"
#include "arock/core/state_view.hpp"
#include "arock/io/sparse.hpp"

namespace arock {

/// How a block is published to concurrent readers.
///  atomic_scalar: one atomic fetch-add per scalar; a read of a multi-scalar
///    block may mix old and new scalars.
///  dual_copy: two copies per block and a sequence number whose parity names
///    the active copy. A writer (one per block at a time) fills the inactive
///    copy and flips; readers retry if the sequence moved under them, so every
///    block read is a completed block state.
///  per_block_lock: a mutex per block around reads and writes.
enum class BlockScheme { atomic_scalar, dual_copy, per_block_lock };

BlockScheme parse_block_scheme(const std::string& name);
std::string to_string(BlockScheme s);
/// atomic_scalar for scalar blocks, dual_copy otherwise.
BlockScheme default_scheme(const BlockLayout& layout);

/// The global iterate and its auxiliary cache as seen by all agents.
class SharedState {
 public:
  SharedState(BlockLayout layout, std::span<const double> x0, std::span<const double> aux0,
              BlockScheme scheme);

  const BlockLayout& layout() const { return layout_; }
  BlockScheme scheme() const { return scheme_; }
  std::size_t dim() const { return layout_.dim(); }
  std::size_t aux_dim() const { return aux_size_; }

  /// Block b as one completed state under dual_copy / per_block_lock; scalar
  /// loads under atomic_scalar.
  void read_block(std::size_t b, std::span<double> out) const;
  /// Single scalar, no block guarantee beyond the scalar itself.
  double load(std::size_t j) const;
  /// Adds delta to block b under the scheme's protocol.
  void commit(std::size_t b, std::span<const double> delta);

  /// Lock-free scalar view (atomic_scalar only).
  StateView atomic_view() const { return StateView(primary_.get(), dim()); }
  StateView aux_view() const { return StateView(aux_.get(), aux_size_); }
  AuxSink aux_sink() { return AuxSink(aux_.get(), aux_size_); }
  void aux_add(std::size_t j, double v) { aux_[j].fetch_add(v, std::memory_order_relaxed); }

  /// Copies of x and the cache. Exact only when no agent is writing.
  Vec snapshot() const;
  Vec aux_snapshot() const;

 private:
  BlockLayout layout_;
  BlockScheme scheme_;
  std::size_t aux_size_;
  std::unique_ptr<std::atomic<double>[]> primary_;    ///< copy 0 (the only copy unless dual)
  std::unique_ptr<std::atomic<double>[]> secondary_;  ///< copy 1 under dual_copy
  std::unique_ptr<std::atomic<std::uint64_t>[]> seq_;
  std::unique_ptr<std::mutex[]> locks_;
  std::unique_ptr<std::atomic<double>[]> aux_;
};

/// Per-agent lazy reader for schemes that publish whole blocks: the first
/// touch of a block copies it in, later touches in the same read reuse it.
class BlockCache final : public ReadSource {
 public:
  explicit BlockCache(const SharedState& state);
  /// Starts a new read; cached blocks are forgotten.
  void reset() { ++epoch_; }
  double read(std::size_t j) override;
  StateView view() { return StateView(this, values_.size()); }

 private:
  const SharedState* state_;
  Vec values_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 1;
};

/// Adds delta into block i of the shared iterate.
void atomic_block_commit(SharedState& state, std::size_t block, std::span<const double> delta);

/// cache += A[:, block] * delta, with `columns` holding A transposed (row c
/// lists the samples touching feature c). Throws on mismatched shapes.
void maintain_cache_Ax(SharedState& state, std::size_t block, std::span<const double> delta,
                       const SparseMatrixCSR& columns);

}  // namespace arock
