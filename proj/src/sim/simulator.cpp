#include "arock/sim/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "arock/core/fejer.hpp"
#include "arock/core/update.hpp"

namespace arock {

SimSetup prepare_simulation(const SimRun& cfg) {
  if (!cfg.op) throw std::invalid_argument("simulation: no operator");
  const ProblemOperator& op = *cfg.op;
  const std::size_t m = op.num_blocks();
  if (m == 0) throw std::invalid_argument("simulation: operator has no blocks");
  if (cfg.epochs == 0) throw std::invalid_argument("simulation: epochs must be positive");

  SimSetup s;
  s.probs = cfg.probs.size() == 0 ? SamplingDistribution::uniform(m) : cfg.probs;
  if (s.probs.size() != m)
    throw std::invalid_argument("simulation: distribution has " + std::to_string(s.probs.size()) +
                                " entries for " + std::to_string(m) + " blocks");
  s.x0 = cfg.x0.empty() ? Vec(op.dim(), 0.0) : cfg.x0;
  if (s.x0.size() != op.dim()) throw std::invalid_argument("simulation: x0 has wrong size");
  if (!all_finite(s.x0)) throw std::invalid_argument("simulation: x0 is not finite");
  if (cfg.x_star && cfg.x_star->size() != op.dim())
    throw std::invalid_argument("simulation: x_star has wrong size");
  if (cfg.delay.kind == DelayPolicy::Kind::per_coordinate && cfg.delay.block_lags.size() != m)
    throw std::invalid_argument("simulation: per_coordinate delay needs one lag per block");

  s.tau = cfg.delay.bound();
  s.eta = cfg.step.resolve(m, s.probs.p_min(), s.tau);
  const double p_min = s.probs.p_min();
  const double bound =
      static_cast<double>(m) * p_min / (2.0 * static_cast<double>(s.tau) * std::sqrt(p_min) + 1.0);
  if (s.eta > bound) {
    std::ostringstream msg;
    msg << "step " << s.eta << " exceeds the Fejer-safe bound " << bound << " for tau = " << s.tau
        << "; convergence is not guaranteed";
    s.warnings.push_back(msg.str());
  }
  return s;
}

SimStepper::SimStepper(const SimRun& cfg)
    : cfg_(cfg),
      setup_(prepare_simulation(cfg)),
      history_(setup_.x0, setup_.tau, cfg.op->layout()),
      aux_(cfg.op->make_aux(setup_.x0)),
      block_rng_(make_stream_rng(cfg.seed, 0)),
      delay_rng_(make_stream_rng(cfg.seed, kDelayStream)) {}

std::vector<std::int64_t> SimStepper::draw_delay() {
  return cfg_.delay.generate(history_, cfg_.read_mode, delay_rng_);
}

void SimStepper::read(std::span<const std::int64_t> J, std::size_t block, Vec& xhat,
                      Vec& aux_hat) const {
  const ProblemOperator& op = *cfg_.op;
  xhat = reconstruct_xhat(history_, history_.step(), J);
  if (op.own_block_fresh()) {
    const auto& lay = op.layout();
    const Vec& now = history_.current();
    for (std::size_t j = lay.begin(block); j < lay.end(block); ++j) xhat[j] = now[j];
  }
  aux_hat = aux_;
  if (aux_hat.empty()) return;
  Vec undo;
  for (std::int64_t d : J) {
    const StepRecord* r = history_.record(d);
    if (!r) continue;
    undo.resize(r->delta.size());
    for (std::size_t t = 0; t < undo.size(); ++t) undo[t] = -r->delta[t];
    op.aux_delta(r->block, undo, AuxSink(std::span<double>(aux_hat)));
  }
}

void SimStepper::apply(std::size_t block, std::span<const double> delta) {
  history_.push(block, delta);
  if (!aux_.empty()) cfg_.op->aux_delta(block, delta, AuxSink(std::span<double>(aux_)));
}

std::size_t SimStepper::advance() {
  const std::size_t block = draw_block();
  const std::vector<std::int64_t> J = draw_delay();
  Vec xhat, aux_hat;
  read(J, block, xhat, aux_hat);
  Vec delta(cfg_.op->layout().size(block));
  block_step_delta(*cfg_.op, block, StateView(xhat), StateView(aux_hat), setup_.eta, setup_.probs,
                   delta);
  apply(block, delta);
  return block;
}

RunMetrics run_simulation(const SimRun& cfg) {
  SimStepper sim(cfg);
  const ProblemOperator& op = *cfg.op;
  const std::size_t m = op.num_blocks();
  const double p_min = sim.setup().probs.p_min();

  RunMetrics out;
  out.eta = sim.setup().eta;
  out.warnings = sim.setup().warnings;

  auto log_row = [&](std::size_t epoch) {
    const Vec& x = sim.history().current();
    EpochRow row;
    row.epoch = epoch;
    row.residual = op.fixed_point_residual(x);
    if (cfg.track_objective) row.objective = op.objective(x);
    if (cfg.x_star) {
      row.dist_sq = dist_sq(x, *cfg.x_star);
      if (cfg.track_xi) {
        const auto window = sim.history().window();
        row.xi = xi_metric(window, *cfg.x_star, p_min, sim.history().tau());
      }
    }
    row.eta = out.eta;
    out.rows.push_back(row);
  };

  log_row(0);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t s = 0; s < m; ++s) {
      sim.advance();
      if (cfg.record_trace) out.trace.push_back(sim.history().current());
    }
    log_row(epoch);
    if (!std::isfinite(out.rows.back().residual)) {
      out.warnings.push_back("iterates diverged at epoch " + std::to_string(epoch));
      break;
    }
  }
  out.final_x = sim.history().current();
  out.final_residual = out.rows.back().residual;
  out.total_updates = static_cast<std::uint64_t>(sim.history().step());
  return out;
}

Vec simulate_sync_sweeps(const ProblemOperator& op, std::span<const double> x0, double eta,
                         std::size_t sweeps) {
  if (x0.size() != op.dim()) throw std::invalid_argument("simulate_sync_sweeps: x0 has wrong size");
  const auto& lay = op.layout();
  Vec x(x0.begin(), x0.end());
  Vec next(x.size());
  for (std::size_t s = 0; s < sweeps; ++s) {
    const Vec aux = op.make_aux(x);
    next = x;
    for (std::size_t i = 0; i < lay.num_blocks(); ++i) {
      Vec delta(lay.size(i));
      op.eval_S_block(i, StateView(x), StateView(aux), delta);
      for (std::size_t t = 0; t < delta.size(); ++t) next[lay.begin(i) + t] += -(eta * delta[t]);
    }
    x.swap(next);
  }
  return x;
}

}  // namespace arock
