#include "arock/engine/shared_state.hpp"

#include <stdexcept>

namespace arock {

BlockScheme parse_block_scheme(const std::string& name) {
  if (name == "atomic_scalar") return BlockScheme::atomic_scalar;
  if (name == "dual_copy") return BlockScheme::dual_copy;
  if (name == "per_block_lock") return BlockScheme::per_block_lock;
  throw std::invalid_argument("unknown block scheme '" + name + "'");
}

std::string to_string(BlockScheme s) {
  switch (s) {
    case BlockScheme::atomic_scalar: return "atomic_scalar";
    case BlockScheme::dual_copy: return "dual_copy";
    case BlockScheme::per_block_lock: return "per_block_lock";
  }
  return "?";
}

BlockScheme default_scheme(const BlockLayout& layout) {
  return layout.all_scalar() ? BlockScheme::atomic_scalar : BlockScheme::dual_copy;
}

SharedState::SharedState(BlockLayout layout, std::span<const double> x0,
                         std::span<const double> aux0, BlockScheme scheme)
    : layout_(std::move(layout)), scheme_(scheme), aux_size_(aux0.size()) {
  const std::size_t n = layout_.dim();
  if (x0.size() != n) throw std::invalid_argument("SharedState: x0 does not match the layout");
  primary_ = std::make_unique<std::atomic<double>[]>(n);
  for (std::size_t j = 0; j < n; ++j) primary_[j].store(x0[j], std::memory_order_relaxed);
  const std::size_t m = layout_.num_blocks();
  if (scheme_ == BlockScheme::dual_copy) {
    secondary_ = std::make_unique<std::atomic<double>[]>(n);
    for (std::size_t j = 0; j < n; ++j) secondary_[j].store(x0[j], std::memory_order_relaxed);
    seq_ = std::make_unique<std::atomic<std::uint64_t>[]>(m);
    for (std::size_t b = 0; b < m; ++b) seq_[b].store(0, std::memory_order_relaxed);
  }
  if (scheme_ != BlockScheme::atomic_scalar) locks_ = std::make_unique<std::mutex[]>(m);
  aux_ = std::make_unique<std::atomic<double>[]>(aux_size_);
  for (std::size_t j = 0; j < aux_size_; ++j) aux_[j].store(aux0[j], std::memory_order_relaxed);
  std::atomic_thread_fence(std::memory_order_release);
}

double SharedState::load(std::size_t j) const {
  if (scheme_ == BlockScheme::dual_copy) {
    const std::uint64_t s = seq_[layout_.block_of(j)].load(std::memory_order_acquire);
    return ((s & 1) ? secondary_ : primary_)[j].load(std::memory_order_relaxed);
  }
  return primary_[j].load(std::memory_order_relaxed);
}

void SharedState::read_block(std::size_t b, std::span<double> out) const {
  const std::size_t first = layout_.begin(b), size = layout_.size(b);
  switch (scheme_) {
    case BlockScheme::atomic_scalar:
      for (std::size_t t = 0; t < size; ++t)
        out[t] = primary_[first + t].load(std::memory_order_relaxed);
      return;
    case BlockScheme::per_block_lock: {
      std::lock_guard<std::mutex> lock(locks_[b]);
      for (std::size_t t = 0; t < size; ++t)
        out[t] = primary_[first + t].load(std::memory_order_relaxed);
      return;
    }
    case BlockScheme::dual_copy:
      for (;;) {
        const std::uint64_t s1 = seq_[b].load(std::memory_order_acquire);
        const auto& copy = (s1 & 1) ? secondary_ : primary_;
        for (std::size_t t = 0; t < size; ++t)
          out[t] = copy[first + t].load(std::memory_order_relaxed);
        std::atomic_thread_fence(std::memory_order_acquire);
        if (seq_[b].load(std::memory_order_relaxed) == s1) return;
      }
  }
}

void SharedState::commit(std::size_t b, std::span<const double> delta) {
  const std::size_t first = layout_.begin(b), size = layout_.size(b);
  switch (scheme_) {
    case BlockScheme::atomic_scalar:
      for (std::size_t t = 0; t < size; ++t)
        primary_[first + t].fetch_add(delta[t], std::memory_order_relaxed);
      return;
    case BlockScheme::per_block_lock: {
      std::lock_guard<std::mutex> lock(locks_[b]);
      for (std::size_t t = 0; t < size; ++t)
        primary_[first + t].store(primary_[first + t].load(std::memory_order_relaxed) + delta[t],
                                  std::memory_order_relaxed);
      return;
    }
    case BlockScheme::dual_copy: {
      std::lock_guard<std::mutex> lock(locks_[b]);
      const std::uint64_t s = seq_[b].load(std::memory_order_relaxed);
      const auto& active = (s & 1) ? secondary_ : primary_;
      const auto& inactive = (s & 1) ? primary_ : secondary_;
      // Release stores: a reader that sees any of these values also sees the
      // earlier flip, so it notices the sequence moved and retries.
      for (std::size_t t = 0; t < size; ++t)
        inactive[first + t].store(active[first + t].load(std::memory_order_relaxed) + delta[t],
                                  std::memory_order_release);
      seq_[b].store(s + 1, std::memory_order_release);
      return;
    }
  }
}

Vec SharedState::snapshot() const {
  Vec out(dim());
  for (std::size_t b = 0; b < layout_.num_blocks(); ++b)
    read_block(b, std::span<double>(out).subspan(layout_.begin(b), layout_.size(b)));
  return out;
}

Vec SharedState::aux_snapshot() const {
  Vec out(aux_size_);
  for (std::size_t j = 0; j < aux_size_; ++j) out[j] = aux_[j].load(std::memory_order_relaxed);
  return out;
}

BlockCache::BlockCache(const SharedState& state)
    : state_(&state), values_(state.dim()), stamp_(state.layout().num_blocks(), 0) {}

double BlockCache::read(std::size_t j) {
  const std::size_t b = state_->layout().block_of(j);
  if (stamp_[b] != epoch_) {
    const auto& lay = state_->layout();
    state_->read_block(b, std::span<double>(values_).subspan(lay.begin(b), lay.size(b)));
    stamp_[b] = epoch_;
  }
  return values_[j];
}

void atomic_block_commit(SharedState& state, std::size_t block, std::span<const double> delta) {
  if (block >= state.layout().num_blocks())
    throw std::out_of_range("atomic_block_commit: block out of range");
  if (delta.size() != state.layout().size(block))
    throw std::invalid_argument("atomic_block_commit: delta size does not match block");
  state.commit(block, delta);
}

void maintain_cache_Ax(SharedState& state, std::size_t block, std::span<const double> delta,
                       const SparseMatrixCSR& columns) {
  const auto& lay = state.layout();
  if (columns.rows() != state.dim() || columns.cols() != state.aux_dim())
    throw std::invalid_argument("maintain_cache_Ax: column matrix is " +
                                std::to_string(columns.rows()) + "x" +
                                std::to_string(columns.cols()) + ", state needs " +
                                std::to_string(state.dim()) + "x" + std::to_string(state.aux_dim()));
  if (block >= lay.num_blocks() || delta.size() != lay.size(block))
    throw std::invalid_argument("maintain_cache_Ax: delta does not match block");
  for (std::size_t c = lay.begin(block); c < lay.end(block); ++c) {
    const double d = delta[c - lay.begin(block)];
    if (d == 0.0) continue;
    for (std::size_t k = columns.row_begin(c); k < columns.row_end(c); ++k)
      state.aux_add(columns.col_idx()[k], columns.values()[k] * d);
  }
}

}  // namespace arock
