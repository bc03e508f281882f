#include "arock/core/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace arock {

Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6172u};
  return Rng(seq);
}

SamplingDistribution::SamplingDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("SamplingDistribution: empty");
  double sum = 0.0;
  p_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double v = probs_[i];
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("SamplingDistribution: p_" + std::to_string(i) +
                                  " must be positive and finite");
    sum += v;
    p_min_ = std::min(p_min_, v);
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("SamplingDistribution: probabilities sum to " +
                                std::to_string(sum) + ", not 1");
  cumulative_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    acc += probs_[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = 1.0;
  uniform_ = std::all_of(probs_.begin(), probs_.end(),
                         [&](double v) { return v == probs_.front(); });
}

SamplingDistribution SamplingDistribution::uniform(std::size_t m) {
  if (m == 0) throw std::invalid_argument("SamplingDistribution: m must be positive");
  SamplingDistribution d;
  d.probs_.assign(m, 1.0 / static_cast<double>(m));
  d.cumulative_.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    d.cumulative_[i] = static_cast<double>(i + 1) / static_cast<double>(m);
  d.p_min_ = d.probs_.front();
  d.uniform_ = true;
  return d;
}

SamplingDistribution SamplingDistribution::from_rates(const std::vector<double>& rates) {
  double total = 0.0;
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("SamplingDistribution: activation rates must be positive");
    total += r;
  }
  std::vector<double> p(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) p[i] = rates[i] / total;
  // Renormalize the rounding residue onto the largest entry.
  double sum = 0.0;
  for (double v : p) sum += v;
  auto it = std::max_element(p.begin(), p.end());
  *it += 1.0 - sum;
  return SamplingDistribution(std::move(p));
}

std::size_t SamplingDistribution::sample(Rng& rng) const {
  if (uniform_) {
    std::uniform_int_distribution<std::size_t> pick(0, probs_.size() - 1);
    return pick(rng);
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u = u01(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::size_t sample_first_activation(const std::vector<double>& rates, Rng& rng) {
  if (rates.empty()) throw std::invalid_argument("sample_first_activation: no clocks");
  std::size_t best = 0;
  double best_t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    std::exponential_distribution<double> clock(rates[i]);
    const double t = clock(rng);
    if (t < best_t) {
      best_t = t;
      best = i;
    }
  }
  return best;
}

}  // namespace arock
