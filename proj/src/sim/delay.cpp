#include "arock/sim/delay.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace arock {

DelayPolicy DelayPolicy::per_coordinate(std::vector<std::size_t> lags) {
  if (lags.empty()) throw std::invalid_argument("per_coordinate delay: empty lag schedule");
  const std::size_t tau = *std::max_element(lags.begin(), lags.end());
  return {Kind::per_coordinate, tau, std::move(lags)};
}

std::vector<std::int64_t> DelayPolicy::generate(const IterateHistory& h, ReadMode mode,
                                                Rng& rng) const {
  if (tau > h.tau())
    throw std::invalid_argument("delay policy bound exceeds the history window");
  const std::int64_t k = h.step();
  const auto t = static_cast<std::int64_t>(tau);
  std::vector<std::int64_t> J;
  auto suffix = [&](std::int64_t depth) {
    for (std::int64_t d = k - depth; d < k; ++d) J.push_back(d);
  };

  switch (kind) {
    case Kind::none:
      break;
    case Kind::fixed:
    case Kind::adversarial_max:
      suffix(t);
      break;
    case Kind::uniform_random:
      if (mode == ReadMode::consistent) {
        std::uniform_int_distribution<std::int64_t> depth(0, t);
        suffix(depth(rng));
      } else {
        for (std::int64_t d = k - t; d < k; ++d)
          if (rng() >> 63) J.push_back(d);
      }
      return J;
    case Kind::per_coordinate:
      for (std::int64_t d = k - t; d < k; ++d) {
        const StepRecord* r = h.record(d);
        if (!r) continue;
        if (r->block >= block_lags.size())
          throw std::invalid_argument("per_coordinate delay: no lag for block " +
                                      std::to_string(r->block));
        if (d >= k - static_cast<std::int64_t>(block_lags[r->block])) J.push_back(d);
      }
      break;
  }
  if (mode == ReadMode::consistent && !J.empty() && J.front() != k - static_cast<std::int64_t>(J.size())) {
    const std::int64_t oldest = J.front();
    J.clear();
    for (std::int64_t d = oldest; d < k; ++d) J.push_back(d);
  }
  return J;
}

std::string DelayPolicy::describe() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::fixed: return "fixed(" + std::to_string(tau) + ")";
    case Kind::uniform_random: return "uniform_random(" + std::to_string(tau) + ")";
    case Kind::adversarial_max: return "adversarial_max(" + std::to_string(tau) + ")";
    case Kind::per_coordinate: return "per_coordinate(" + std::to_string(tau) + ")";
  }
  return "?";
}

DelayPolicy::Kind parse_delay_kind(const std::string& name) {
  if (name == "none") return DelayPolicy::Kind::none;
  if (name == "fixed") return DelayPolicy::Kind::fixed;
  if (name == "uniform" || name == "uniform_random") return DelayPolicy::Kind::uniform_random;
  if (name == "adversarial" || name == "adversarial_max") return DelayPolicy::Kind::adversarial_max;
  if (name == "per_coordinate") return DelayPolicy::Kind::per_coordinate;
  throw std::invalid_argument("unknown delay policy '" + name + "'");
}

}  // namespace arock
