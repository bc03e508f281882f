#include "arock/engine/engine.hpp"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "arock/core/update.hpp"

namespace arock {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Snapshot {
  std::size_t epoch;
  double wall_ms;
  std::uint64_t max_staleness;
  Vec x;
};

/// Everything the agents share besides the iterate.
struct RunContext {
  const ProblemOperator& op;
  const EngineConfig& cfg;
  SamplingDistribution probs;
  double eta = 0.0;
  std::uint64_t total = 0;
  std::uint64_t snapshot_gap = 0;
  Vec x0;
  std::vector<std::string> warnings;

  std::atomic<std::uint64_t> claimed{0};
  std::atomic<std::uint64_t> commits{0};
  std::atomic<std::uint64_t> max_stale{0};
  std::atomic<bool> abort{false};

  std::mutex mu;
  std::exception_ptr error;
  std::vector<Snapshot> snapshots;
  std::vector<std::uint32_t> committed;
  std::vector<Vec> trace;

  RunContext(const ProblemOperator& o, const EngineConfig& c) : op(o), cfg(c) {}

  void fail(std::exception_ptr e) {
    std::lock_guard<std::mutex> lock(mu);
    if (!error) error = e;
    abort.store(true, std::memory_order_relaxed);
  }
};

void prepare(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ProblemOperator& op = ctx.op;
  if (cfg.agents == 0) throw std::invalid_argument("engine: need at least one agent");
  if (cfg.epochs == 0) throw std::invalid_argument("engine: epochs must be positive");
  if (cfg.snapshot_every == 0) throw std::invalid_argument("engine: snapshot_every must be positive");
  const std::size_t m = op.num_blocks();
  if (m == 0) throw std::invalid_argument("engine: operator has no blocks");
  ctx.probs = cfg.probs.size() == 0 ? SamplingDistribution::uniform(m) : cfg.probs;
  if (ctx.probs.size() != m) throw std::invalid_argument("engine: distribution size mismatch");
  ctx.x0 = cfg.x0.empty() ? Vec(op.dim(), 0.0) : cfg.x0;
  if (ctx.x0.size() != op.dim()) throw std::invalid_argument("engine: x0 has wrong size");
  if (cfg.x_star && cfg.x_star->size() != op.dim())
    throw std::invalid_argument("engine: x_star has wrong size");
  const std::size_t tau = cfg.assumed_tau.value_or(cfg.agents - 1);
  ctx.eta = cfg.step.resolve(m, ctx.probs.p_min(), tau);
  ctx.total = static_cast<std::uint64_t>(cfg.epochs) * m;
  ctx.snapshot_gap = static_cast<std::uint64_t>(cfg.snapshot_every) * m;
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw != 0 && cfg.agents > hw)
    ctx.warnings.push_back("running " + std::to_string(cfg.agents) + " agents on " +
                           std::to_string(hw) + " hardware threads");
  if (cfg.record_orders) ctx.committed.assign(ctx.total, 0);
  if (cfg.record_trace) ctx.trace.resize(ctx.total);
}

/// Per-agent bookkeeping, merged after join.
struct AgentLog {
  std::uint64_t updates = 0;
  std::vector<std::uint64_t> hist = std::vector<std::uint64_t>(kStalenessBins, 0);
  std::vector<std::uint32_t> sampled;
};

void note_staleness(RunContext& ctx, AgentLog& log, std::uint64_t stale) {
  ++log.hist[std::min<std::uint64_t>(stale, kStalenessBins - 1)];
  std::uint64_t cur = ctx.max_stale.load(std::memory_order_relaxed);
  while (stale > cur &&
         !ctx.max_stale.compare_exchange_weak(cur, stale, std::memory_order_relaxed)) {
  }
}

void after_commit(RunContext& ctx, const SharedState& state, std::uint64_t c, std::size_t block,
                  Clock::time_point t0) {
  if (ctx.cfg.record_orders) ctx.committed[c] = static_cast<std::uint32_t>(block);
  if (ctx.cfg.record_trace) ctx.trace[c] = state.snapshot();
  const std::uint64_t done = c + 1;
  if (done % ctx.snapshot_gap == 0 || done == ctx.total) {
    Snapshot s{static_cast<std::size_t>(done / ctx.op.num_blocks()), ms_since(t0),
               ctx.max_stale.load(std::memory_order_relaxed), state.snapshot()};
    std::lock_guard<std::mutex> lock(ctx.mu);
    ctx.snapshots.push_back(std::move(s));
  }
}

RunMetrics finish(RunContext& ctx, const SharedState& state, std::vector<AgentLog>& logs,
                  double wall_ms) {
  const ProblemOperator& op = ctx.op;
  RunMetrics out;
  out.eta = ctx.eta;
  out.warnings = ctx.warnings;
  out.wall_ms = wall_ms;
  auto row_for = [&](std::size_t epoch, const Vec& x, double ms, std::uint64_t stale) {
    EpochRow r;
    r.epoch = epoch;
    r.residual = op.fixed_point_residual(x);
    if (ctx.cfg.track_objective) r.objective = op.objective(x);
    if (ctx.cfg.x_star) r.dist_sq = dist_sq(x, *ctx.cfg.x_star);
    r.eta = ctx.eta;
    r.wall_ms = ms;
    r.max_staleness = stale;
    return r;
  };
  out.rows.push_back(row_for(0, ctx.x0, 0.0, 0));
  std::sort(ctx.snapshots.begin(), ctx.snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.epoch < b.epoch; });
  for (const auto& s : ctx.snapshots) out.rows.push_back(row_for(s.epoch, s.x, s.wall_ms, s.max_staleness));

  out.final_x = state.snapshot();
  out.final_residual = op.fixed_point_residual(out.final_x);
  out.total_updates = ctx.commits.load();
  out.max_staleness = ctx.max_stale.load();
  out.staleness_histogram.assign(kStalenessBins, 0);
  for (auto& log : logs) {
    out.agent_updates.push_back(log.updates);
    for (std::size_t b = 0; b < kStalenessBins; ++b) out.staleness_histogram[b] += log.hist[b];
    out.sampled_order.insert(out.sampled_order.end(), log.sampled.begin(), log.sampled.end());
  }
  while (!out.staleness_histogram.empty() && out.staleness_histogram.back() == 0)
    out.staleness_histogram.pop_back();
  out.committed_order = std::move(ctx.committed);
  out.trace = std::move(ctx.trace);
  return out;
}

/// Reader bound to one agent: the lock-free scalar view or a lazy block cache.
struct AgentReader {
  std::optional<BlockCache> cache;
  StateView view;
  explicit AgentReader(const SharedState& state) {
    if (state.scheme() == BlockScheme::atomic_scalar) {
      view = state.atomic_view();
    } else {
      cache.emplace(state);
      view = cache->view();
    }
  }
  void reset() {
    if (cache) cache->reset();
  }
};

void check_delta(std::span<const double> delta, std::size_t block) {
  if (!all_finite(delta))
    throw std::runtime_error("engine: non-finite update for block " + std::to_string(block));
}

}  // namespace

RunMetrics run_engine(const EngineConfig& cfg, const ProblemOperator& op) {
  RunContext ctx(op, cfg);
  prepare(ctx);
  const Vec aux0 = op.make_aux(ctx.x0);
  SharedState state(op.layout(), ctx.x0, aux0, cfg.scheme.value_or(default_scheme(op.layout())));
  const auto& lay = op.layout();
  std::vector<AgentLog> logs(cfg.agents);
  const auto t0 = Clock::now();

  auto agent = [&](std::size_t a) {
    try {
      Rng rng = make_stream_rng(cfg.seed, a);
      AgentReader reader(state);
      const StateView aux_view = state.aux_view();
      const AuxSink sink = state.aux_sink();
      Vec buffer(lay.max_block_size());
      AgentLog& log = logs[a];
      for (;;) {
        if (ctx.abort.load(std::memory_order_relaxed)) return;
        std::uint64_t t = ctx.claimed.load(std::memory_order_relaxed);
        do {
          if (t >= ctx.total) return;
        } while (!ctx.claimed.compare_exchange_weak(t, t + 1, std::memory_order_relaxed));

        const std::size_t block = ctx.probs.sample(rng);
        if (cfg.record_orders) log.sampled.push_back(static_cast<std::uint32_t>(block));
        const std::uint64_t read_stamp = ctx.commits.load(std::memory_order_acquire);
        reader.reset();
        const std::span<double> delta(buffer.data(), lay.size(block));
        block_step_delta(op, block, reader.view, aux_view, ctx.eta, ctx.probs, delta);
        check_delta(delta, block);
        state.commit(block, delta);
        op.aux_delta(block, delta, sink);
        const std::uint64_t c = ctx.commits.fetch_add(1, std::memory_order_acq_rel);
        ++log.updates;
        note_staleness(ctx, log, c - read_stamp);
        after_commit(ctx, state, c, block, t0);
      }
    } catch (...) {
      ctx.fail(std::current_exception());
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(cfg.agents);
  for (std::size_t a = 0; a < cfg.agents; ++a) threads.emplace_back(agent, a);
  for (auto& th : threads) th.join();
  const double wall = ms_since(t0);
  if (ctx.error) std::rethrow_exception(ctx.error);
  return finish(ctx, state, logs, wall);
}

RunMetrics run_sync_baseline(const EngineConfig& cfg, const ProblemOperator& op) {
  RunContext ctx(op, cfg);
  prepare(ctx);
  const Vec aux0 = op.make_aux(ctx.x0);
  SharedState state(op.layout(), ctx.x0, aux0, cfg.scheme.value_or(default_scheme(op.layout())));
  const auto& lay = op.layout();
  const std::size_t p = cfg.agents;
  const std::uint64_t rounds = (ctx.total + p - 1) / p;
  std::vector<AgentLog> logs(p);
  std::barrier<> sync(static_cast<std::ptrdiff_t>(p));
  const auto t0 = Clock::now();

  auto agent = [&](std::size_t a) {
    Rng rng = make_stream_rng(cfg.seed, a);
    AgentReader reader(state);
    const StateView aux_view = state.aux_view();
    const AuxSink sink = state.aux_sink();
    Vec buffer(lay.max_block_size());
    AgentLog& log = logs[a];
    for (std::uint64_t r = 0; r < rounds; ++r) {
      const bool active = r * p + a < ctx.total;
      std::size_t block = 0;
      std::span<double> delta;
      std::uint64_t read_stamp = 0;
      if (active && !ctx.abort.load(std::memory_order_relaxed)) {
        try {
          block = ctx.probs.sample(rng);
          if (cfg.record_orders) log.sampled.push_back(static_cast<std::uint32_t>(block));
          read_stamp = ctx.commits.load(std::memory_order_acquire);
          reader.reset();
          delta = std::span<double>(buffer.data(), lay.size(block));
          block_step_delta(op, block, reader.view, aux_view, ctx.eta, ctx.probs, delta);
          check_delta(delta, block);
        } catch (...) {
          ctx.fail(std::current_exception());
        }
      }
      sync.arrive_and_wait();
      if (ctx.abort.load(std::memory_order_relaxed)) return;
      if (active) {
        state.commit(block, delta);
        op.aux_delta(block, delta, sink);
        const std::uint64_t c = ctx.commits.fetch_add(1, std::memory_order_acq_rel);
        ++log.updates;
        note_staleness(ctx, log, c - read_stamp);
        if (cfg.record_orders) ctx.committed[c] = static_cast<std::uint32_t>(block);
      }
      sync.arrive_and_wait();
      if (a == 0) {
        // Quiescent here: nobody writes before the next first barrier.
        const std::uint64_t before = std::min<std::uint64_t>(r * p, ctx.total);
        const std::uint64_t after = std::min<std::uint64_t>((r + 1) * p, ctx.total);
        if (after / ctx.snapshot_gap > before / ctx.snapshot_gap || after == ctx.total) {
          std::lock_guard<std::mutex> lock(ctx.mu);
          ctx.snapshots.push_back({static_cast<std::size_t>(after / op.num_blocks()), ms_since(t0),
                                   ctx.max_stale.load(), state.snapshot()});
        }
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(p);
  for (std::size_t a = 0; a < p; ++a) threads.emplace_back(agent, a);
  for (auto& th : threads) th.join();
  const double wall = ms_since(t0);
  if (ctx.error) std::rethrow_exception(ctx.error);
  return finish(ctx, state, logs, wall);
}

std::vector<SpeedupRow> measure_speedup(const std::string& problem, const ProblemOperator& op,
                                        const EngineConfig& base,
                                        std::vector<std::size_t> agent_counts, bool with_sync) {
  if (std::find(agent_counts.begin(), agent_counts.end(), std::size_t{1}) == agent_counts.end())
    agent_counts.push_back(1);
  std::sort(agent_counts.begin(), agent_counts.end());
  agent_counts.erase(std::unique(agent_counts.begin(), agent_counts.end()), agent_counts.end());
  if (agent_counts.front() == 0) throw std::invalid_argument("measure_speedup: zero agents");

  std::vector<SpeedupRow> rows;
  for (const bool sync : {false, true}) {
    if (sync && !with_sync) break;
    double serial = 0.0;
    for (std::size_t p : agent_counts) {
      EngineConfig cfg = base;
      cfg.agents = p;
      cfg.track_objective = false;
      cfg.snapshot_every = cfg.epochs;
      const RunMetrics r = sync ? run_sync_baseline(cfg, op) : run_engine(cfg, op);
      const double wall_s = *r.wall_ms / 1000.0;
      if (p == 1) serial = wall_s;
      rows.push_back({problem, p, sync ? "sync" : "async", wall_s, p == 1 ? 1.0 : serial / wall_s});
    }
  }
  return rows;
}

void write_speedup_csv(std::ostream& out, const std::vector<SpeedupRow>& rows) {
  out << "problem,agents,mode,wall_s,speedup\n";
  for (const auto& r : rows)
    out << r.problem << ',' << r.agents << ',' << r.mode << ',' << r.wall_s << ',' << r.speedup
        << '\n';
}

}  // namespace arock
