#include "arock/sim/history.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace arock {

IterateHistory::IterateHistory(Vec x0, std::size_t tau, BlockLayout layout)
    : tau_(tau), layout_(std::move(layout)), x0_(std::move(x0)) {
  if (layout_.dim() != x0_.size())
    throw std::invalid_argument("IterateHistory: x0 does not match the block layout");
  ring_.assign(tau_ + 1, x0_);
  records_.resize(tau_ + 1);
}

void IterateHistory::push(std::size_t block, std::span<const double> delta) {
  if (block >= layout_.num_blocks()) throw std::out_of_range("IterateHistory: bad block");
  if (delta.size() != layout_.size(block))
    throw std::invalid_argument("IterateHistory: delta size does not match block");
  const Vec& now = ring_[slot(k_)];
  Vec& next = ring_[slot(k_ + 1)];
  if (&next != &now) next = now;
  const std::size_t first = layout_.begin(block);
  for (std::size_t t = 0; t < delta.size(); ++t) next[first + t] += delta[t];

  StepRecord& rec = records_[slot(k_)];
  rec.k = k_;
  rec.block = static_cast<std::uint32_t>(block);
  rec.delta.assign(delta.begin(), delta.end());
  ++k_;
}

const Vec& IterateHistory::iterate(std::int64_t j) const {
  if (j < 0) return x0_;
  if (j > k_ || j < k_ - static_cast<std::int64_t>(tau_))
    throw std::out_of_range("IterateHistory: iterate " + std::to_string(j) +
                            " is outside the window at step " + std::to_string(k_));
  return ring_[slot(j)];
}

const StepRecord* IterateHistory::record(std::int64_t d) const {
  if (d < 0) return nullptr;
  if (!in_window(d))
    throw std::out_of_range("IterateHistory: step " + std::to_string(d) +
                            " is outside the window at step " + std::to_string(k_));
  return &records_[slot(d)];
}

std::vector<Vec> IterateHistory::window() const {
  std::vector<Vec> out;
  out.reserve(tau_ + 1);
  for (std::int64_t j = k_ - static_cast<std::int64_t>(tau_); j <= k_; ++j) out.push_back(iterate(j));
  return out;
}

std::vector<double> IterateHistory::step_norms_sq() const {
  std::vector<double> out;
  out.reserve(tau_);
  for (std::int64_t d = k_ - static_cast<std::int64_t>(tau_); d < k_; ++d) {
    const StepRecord* r = record(d);
    out.push_back(r ? norm_sq(r->delta) : 0.0);
  }
  return out;
}

Vec reconstruct_xhat(const IterateHistory& h, std::int64_t k, std::span<const std::int64_t> J) {
  if (k != h.step())
    throw std::invalid_argument("reconstruct_xhat: history is at step " + std::to_string(h.step()) +
                                ", not " + std::to_string(k));
  const Vec& xk = h.current();
  if (J.empty()) return xk;

  const auto tau = static_cast<std::int64_t>(h.tau());
  const std::int64_t lo = k - tau;
  std::vector<char> listed(static_cast<std::size_t>(tau), 0);
  for (std::int64_t d : J) {
    if (d < lo || d >= k)
      throw std::out_of_range("reconstruct_xhat: J contains step " + std::to_string(d) +
                              " outside [" + std::to_string(lo) + ", " + std::to_string(k - 1) + "]");
    listed[static_cast<std::size_t>(d - lo)] = 1;
  }

  // Scan newest to oldest per block. While every update of a block seen so
  // far is listed, its read equals the iterate just before the oldest listed
  // step and can be copied; otherwise the listed deltas are subtracted.
  const auto& lay = h.layout();
  const std::size_t m = lay.num_blocks();
  std::vector<std::int64_t> copy_from(m, -1);
  std::vector<char> suffix(m, 1), exact(m, 1);
  std::vector<std::vector<std::int64_t>> listed_steps(m);
  for (std::int64_t d = k - 1; d >= lo; --d) {
    const StepRecord* r = h.record(d);
    if (!r) break;
    const std::size_t b = r->block;
    if (!listed[static_cast<std::size_t>(d - lo)]) {
      suffix[b] = 0;
      continue;
    }
    listed_steps[b].push_back(d);
    if (suffix[b])
      copy_from[b] = d;
    else
      exact[b] = 0;
  }

  Vec xhat = xk;
  for (std::size_t b = 0; b < m; ++b) {
    if (listed_steps[b].empty()) continue;
    const std::size_t first = lay.begin(b), last = lay.end(b);
    if (exact[b]) {
      const Vec& src = h.iterate(copy_from[b]);
      std::copy(src.begin() + static_cast<std::ptrdiff_t>(first),
                src.begin() + static_cast<std::ptrdiff_t>(last),
                xhat.begin() + static_cast<std::ptrdiff_t>(first));
    } else {
      for (std::int64_t d : listed_steps[b]) {
        const StepRecord* r = h.record(d);
        for (std::size_t t = 0; t < r->delta.size(); ++t) xhat[first + t] -= r->delta[t];
      }
    }
  }
  return xhat;
}

std::vector<Vec> possible_reads(const IterateHistory& h, std::int64_t k, std::size_t tau,
                                ReadMode mode) {
  if (tau > h.tau()) throw std::invalid_argument("possible_reads: tau exceeds history window");
  if (tau > 20) throw std::invalid_argument("possible_reads: tau too large to enumerate");
  std::vector<Vec> reads;
  auto add = [&](Vec v) {
    if (std::find(reads.begin(), reads.end(), v) == reads.end()) reads.push_back(std::move(v));
  };
  std::vector<std::int64_t> J;
  if (mode == ReadMode::consistent) {
    for (std::size_t len = 0; len <= tau; ++len) {
      J.clear();
      for (std::size_t t = 1; t <= len; ++t) J.push_back(k - static_cast<std::int64_t>(t));
      add(reconstruct_xhat(h, k, J));
    }
    return reads;
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tau); ++mask) {
    J.clear();
    for (std::size_t t = 0; t < tau; ++t)
      if (mask >> t & 1) J.push_back(k - 1 - static_cast<std::int64_t>(t));
    add(reconstruct_xhat(h, k, J));
  }
  return reads;
}

}  // namespace arock
