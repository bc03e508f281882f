#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arock/core/block_layout.hpp"
#include "arock/core/linalg.hpp"

namespace arock {

/// What step d did: block `block` moved by `delta`.
struct StepRecord {
  std::int64_t k = -1;
  std::uint32_t block = 0;
  Vec delta;
};

/// The last tau+1 iterates x^{k-tau..k} and the tau step records between
/// them. Iterates with negative index read as x^0.
class IterateHistory {
 public:
  IterateHistory(Vec x0, std::size_t tau, BlockLayout layout);

  /// Applies `delta` to block `block`, producing x^{k+1}.
  void push(std::size_t block, std::span<const double> delta);

  /// Number of updates applied so far.
  std::int64_t step() const { return k_; }
  std::size_t tau() const { return tau_; }
  const BlockLayout& layout() const { return layout_; }
  const Vec& current() const { return iterate(k_); }

  /// x^j for k - tau <= j <= k; x^0 for negative j.
  const Vec& iterate(std::int64_t j) const;
  /// Record of step d for k - tau <= d < k, nullptr for negative d.
  const StepRecord* record(std::int64_t d) const;
  bool in_window(std::int64_t d) const { return d >= k_ - static_cast<std::int64_t>(tau_) && d < k_; }

  /// x^{k-tau}, ..., x^k, oldest first.
  std::vector<Vec> window() const;
  /// |x^d - x^{d+1}|^2 for d = k-tau .. k-1, oldest first.
  std::vector<double> step_norms_sq() const;

 private:
  std::size_t slot(std::int64_t j) const {
    return static_cast<std::size_t>(j % static_cast<std::int64_t>(tau_ + 1));
  }

  std::size_t tau_;
  BlockLayout layout_;
  Vec x0_;
  std::vector<Vec> ring_;
  std::vector<StepRecord> records_;
  std::int64_t k_ = 0;
};

enum class ReadMode { inconsistent, consistent };

/// x^k + sum_{d in J} (x^d - x^{d+1}). Blocks whose listed steps form a
/// suffix of their updates in the window are copied from the matching stored
/// iterate, so the full window reproduces x^{k-tau} bit for bit. Throws if
/// `k` is not the current step or J leaves [k - tau, k - 1].
Vec reconstruct_xhat(const IterateHistory& h, std::int64_t k, std::span<const std::int64_t> J);

/// Every distinct read the delay model admits at the current step: all
/// subsets of the window (inconsistent) or only its suffixes (consistent).
/// Exponential in tau; meant for small worked examples.
std::vector<Vec> possible_reads(const IterateHistory& h, std::int64_t k, std::size_t tau,
                                ReadMode mode);

}  // namespace arock
