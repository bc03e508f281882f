#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace arock {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream). Agent a of the engine draws its
/// block indices from stream a; the simulator uses stream 0 for indices so a
/// single-agent engine run replays the same sequence.
Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::uint64_t kDelayStream = 0x100000000ull;
inline constexpr std::uint64_t kCheckStream = 0x200000000ull;

/// Block selection probabilities p_1..p_m, all positive, summing to one.
class SamplingDistribution {
 public:
  SamplingDistribution() = default;
  explicit SamplingDistribution(std::vector<double> probs);
  static SamplingDistribution uniform(std::size_t m);
  /// Normalized activation rates: P(i fires first) = rate_i / sum(rates).
  static SamplingDistribution from_rates(const std::vector<double>& rates);

  std::size_t size() const { return probs_.size(); }
  double p(std::size_t i) const { return probs_[i]; }
  double p_min() const { return p_min_; }
  bool is_uniform() const { return uniform_; }
  const std::vector<double>& probs() const { return probs_; }

  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  double p_min_ = 0.0;
  bool uniform_ = false;
};

/// Races independent exponential clocks and returns the first to fire.
std::size_t sample_first_activation(const std::vector<double>& rates, Rng& rng);

}  // namespace arock
