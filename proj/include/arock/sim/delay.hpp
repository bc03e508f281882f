#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arock/core/sampling.hpp"
#include "arock/sim/history.hpp"

namespace arock {

/// How the read at step k lags behind: which of the last tau updates, J(k),
/// are still invisible to the reading agent.
struct DelayPolicy {
  enum class Kind { none, fixed, uniform_random, adversarial_max, per_coordinate };

  Kind kind = Kind::none;
  std::size_t tau = 0;
  std::vector<std::size_t> block_lags;  ///< per_coordinate only

  static DelayPolicy none() { return {}; }
  /// Always reads x^{k - lag}.
  static DelayPolicy fixed(std::size_t lag) { return {Kind::fixed, lag, {}}; }
  /// Consistent reads draw d ~ U{0..tau} and read x^{k-d}; inconsistent reads
  /// drop each of the last tau updates independently with probability 1/2.
  static DelayPolicy uniform_random(std::size_t tau) { return {Kind::uniform_random, tau, {}}; }
  /// J(k) is the whole window: every read is as stale as allowed.
  static DelayPolicy adversarial_max(std::size_t tau) { return {Kind::adversarial_max, tau, {}}; }
  /// Updates to block b stay invisible for block_lags[b] steps.
  static DelayPolicy per_coordinate(std::vector<std::size_t> lags);

  /// The delay bound tau implied by the policy.
  std::size_t bound() const { return tau; }

  /// J(k) as ascending step indices, all within [k - tau, k - 1]. Consistent
  /// mode closes J to a suffix {k - d, ..., k - 1}.
  std::vector<std::int64_t> generate(const IterateHistory& h, ReadMode mode, Rng& rng) const;

  std::string describe() const;
};

DelayPolicy::Kind parse_delay_kind(const std::string& name);

}  // namespace arock
