#pragma once

#include <cstdint>
#include <optional>

#include "arock/core/metrics.hpp"
#include "arock/core/operator.hpp"
#include "arock/core/sampling.hpp"
#include "arock/core/step_size.hpp"
#include "arock/sim/delay.hpp"
#include "arock/sim/history.hpp"

namespace arock {

/// One deterministic single-threaded execution of the asynchronous update
/// rule under a delay model. Block indices come from stream 0 of `seed`
/// (the stream a lone engine agent uses), delay draws from kDelayStream.
struct SimRun {
  const ProblemOperator* op = nullptr;
  SamplingDistribution probs;  ///< empty selects uniform
  StepSizePolicy step = StepSizePolicy::fejer();
  DelayPolicy delay;
  ReadMode read_mode = ReadMode::inconsistent;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  Vec x0;                      ///< empty selects zeros
  std::optional<Vec> x_star;
  bool track_xi = true;        ///< needs x_star
  bool track_objective = true;
  bool record_trace = false;
};

/// Validated pieces of a SimRun.
struct SimSetup {
  SamplingDistribution probs;
  double eta = 0.0;
  std::size_t tau = 0;
  Vec x0;
  std::vector<std::string> warnings;
};

/// Resolves defaults and checks sizes; the step is resolved against the
/// delay bound. Steps above m p_min / (2 tau sqrt(p_min) + 1) only warn.
SimSetup prepare_simulation(const SimRun& cfg);

/// Runs epochs * m steps and logs every m steps, starting with epoch 0.
RunMetrics run_simulation(const SimRun& cfg);

/// Advances a simulation one step at a time; shared by run_simulation and
/// the convergence checks so they walk the same trajectory.
class SimStepper {
 public:
  explicit SimStepper(const SimRun& cfg);

  /// Samples a block and J(k), applies the update, returns the block.
  std::size_t advance();
  /// Builds the read for step k from J, including the cache and the own-block
  /// rule. `J` must come from the current history.
  void read(std::span<const std::int64_t> J, std::size_t block, Vec& xhat, Vec& aux_hat) const;
  std::vector<std::int64_t> draw_delay();
  std::size_t draw_block() { return setup_.probs.sample(block_rng_); }
  void apply(std::size_t block, std::span<const double> delta);

  const IterateHistory& history() const { return history_; }
  const SimSetup& setup() const { return setup_; }
  const Vec& aux() const { return aux_; }
  const ProblemOperator& op() const { return *cfg_.op; }

 private:
  SimRun cfg_;
  SimSetup setup_;
  IterateHistory history_;
  Vec aux_;
  Rng block_rng_;
  Rng delay_rng_;
};

/// Every block reads the same x and updates with step eta (no m p_i
/// normalization), repeated `sweeps` times. Matches km_step with alpha = eta.
Vec simulate_sync_sweeps(const ProblemOperator& op, std::span<const double> x0, double eta,
                         std::size_t sweeps);

}  // namespace arock
