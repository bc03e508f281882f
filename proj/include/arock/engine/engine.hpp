#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arock/core/metrics.hpp"
#include "arock/core/operator.hpp"
#include "arock/core/sampling.hpp"
#include "arock/core/step_size.hpp"
#include "arock/engine/shared_state.hpp"

namespace arock {

struct EngineConfig {
  std::size_t agents = 1;
  std::size_t epochs = 10;
  SamplingDistribution probs;  ///< empty selects uniform
  StepSizePolicy step = StepSizePolicy::fejer();
  /// Delay bound assumed when resolving a delay-dependent step; the default
  /// (agents - 1) is the staleness of one in-flight update per other agent.
  std::optional<std::size_t> assumed_tau;
  std::optional<BlockScheme> scheme;  ///< default_scheme(layout) when unset
  std::uint64_t seed = 0;             ///< agent a draws from stream a
  Vec x0;                             ///< empty selects zeros
  std::optional<Vec> x_star;
  std::size_t snapshot_every = 1;     ///< epochs between logged rows
  bool track_objective = true;
  bool record_orders = false;
  bool record_trace = false;          ///< iterate after every commit (meaningful for one agent)
};

/// Number of staleness histogram bins; the last bin counts everything larger.
inline constexpr std::size_t kStalenessBins = 1024;

/// Runs `agents` threads until exactly epochs * m updates are committed.
/// Each update claims a ticket first, so the counter never overshoots.
/// Rows are logged from snapshots taken by whichever agent completes an
/// epoch; their residuals are evaluated after the threads join. An exception
/// in any agent stops all of them and is rethrown here.
RunMetrics run_engine(const EngineConfig& cfg, const ProblemOperator& op);

/// Barrier-synchronized baseline: in each round every agent reads the same
/// state, computes one block update, waits, then all commit and wait again.
RunMetrics run_sync_baseline(const EngineConfig& cfg, const ProblemOperator& op);

struct SpeedupRow {
  std::string problem;
  std::size_t agents = 0;
  std::string mode;  ///< "async" or "sync"
  double wall_s = 0.0;
  double speedup = 0.0;  ///< wall time at one agent (same mode) over this one
};

/// Wall time for every agent count in `agent_counts` (1 is added if absent),
/// for the async engine and, when `with_sync`, the synchronous baseline.
std::vector<SpeedupRow> measure_speedup(const std::string& problem, const ProblemOperator& op,
                                        const EngineConfig& base,
                                        std::vector<std::size_t> agent_counts, bool with_sync);

void write_speedup_csv(std::ostream& out, const std::vector<SpeedupRow>& rows);

}  // namespace arock
