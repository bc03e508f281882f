#include "arock/sim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arock/core/fejer.hpp"
#include "arock/core/update.hpp"

namespace arock {

InequalityReport verify_fundamental_inequality(const SimRun& cfg, std::span<const double> x_star,
                                               std::size_t trials, std::size_t steps,
                                               std::size_t exact_limit) {
  if (trials < 30)
    throw std::invalid_argument("verify_fundamental_inequality: need at least 30 trials, got " +
                                std::to_string(trials));
  SimStepper sim(cfg);
  const ProblemOperator& op = sim.op();
  if (x_star.size() != op.dim())
    throw std::invalid_argument("verify_fundamental_inequality: x_star has wrong size");
  const auto& lay = op.layout();
  const std::size_t m = lay.num_blocks();
  const auto& probs = sim.setup().probs;
  const double eta = sim.setup().eta;
  const std::size_t tau = sim.setup().tau;
  const double p_min = probs.p_min();
  const double md = static_cast<double>(m);

  InequalityReport rep;
  rep.coefficient = (1.0 / md) * (1.0 / eta - 2.0 * static_cast<double>(tau) / (md * std::sqrt(p_min)) -
                                  1.0 / (md * p_min));
  rep.guaranteed = rep.coefficient >= 0.0;
  rep.exact = m <= exact_limit;
  rep.worst_margin_ratio = std::numeric_limits<double>::infinity();
  Rng check_rng = make_stream_rng(cfg.seed, kCheckStream);

  std::vector<Vec> deltas(m);
  Vec xhat, aux_hat;
  for (std::size_t step = 0; step < steps; ++step) {
    const IterateHistory& h = sim.history();
    const Vec& xk = h.current();
    const std::vector<std::int64_t> J = sim.draw_delay();

    // S xhat blockwise, and the increment each block would commit.
    double s_sq = 0.0;
    bool have_read = false;
    for (std::size_t b = 0; b < m; ++b) {
      if (!have_read || op.own_block_fresh()) {
        sim.read(J, b, xhat, aux_hat);
        have_read = true;
      }
      Vec s(lay.size(b));
      op.eval_S_block(b, StateView(xhat), StateView(aux_hat), s);
      s_sq += norm_sq(s);
      deltas[b].resize(s.size());
      block_step_delta(op, b, StateView(xhat), StateView(aux_hat), eta, probs, deltas[b]);
    }

    const double dist_now = dist_sq(xk, x_star);
    std::vector<double> step_sq = h.step_norms_sq();
    const double xi_k = xi_metric_from_steps(dist_now, step_sq, p_min);
    const double gap_sq = eta * eta * s_sq;

    auto bracket = [&](std::size_t i) {
      double dist_next = dist_now;
      const Vec& d = deltas[i];
      for (std::size_t t = 0; t < d.size(); ++t) {
        const std::size_t j = lay.begin(i) + t;
        const double before = xk[j] - x_star[j];
        const double after = before + d[t];
        dist_next += after * after - before * before;
      }
      std::vector<double> next_steps;
      if (tau > 0) {
        next_steps.assign(step_sq.begin() + 1, step_sq.end());
        next_steps.push_back(norm_sq(d));
      }
      return xi_metric_from_steps(dist_next, next_steps, p_min) + rep.coefficient * gap_sq;
    };

    InequalityStep row;
    row.k = h.step();
    row.xi = xi_k;
    row.gap_sq = gap_sq;
    if (rep.exact) {
      double e = 0.0;
      for (std::size_t i = 0; i < m; ++i) e += probs.p(i) * bracket(i);
      row.expected_lhs = e;
    } else {
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const double q = bracket(probs.sample(check_rng));
        sum += q;
        sum_sq += q * q;
      }
      const double n = static_cast<double>(trials);
      const double mean = sum / n;
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
      row.expected_lhs = mean;
      row.std_error = std::sqrt(var / n);
    }
    row.margin = xi_k - row.expected_lhs;
    const double allowance = 3.0 * row.std_error + 1e-9 * (1.0 + xi_k);
    row.violated = row.margin < -allowance;
    if (row.violated) ++rep.violations;
    rep.worst_margin_ratio = std::min(rep.worst_margin_ratio, row.margin / allowance);
    rep.steps.push_back(row);

    const std::size_t block = sim.draw_block();
    sim.apply(block, deltas[block]);
  }
  return rep;
}

LinearRateReport verify_linear_rate(const SimRun& cfg, std::span<const double> x_star, double mu,
                                    double beta, std::size_t seeds, double slack, double rho) {
  if (!(mu > 0.0)) throw std::invalid_argument("verify_linear_rate: mu must be positive");
  if (seeds == 0) throw std::invalid_argument("verify_linear_rate: need at least one seed");
  const SimSetup setup = prepare_simulation(cfg);
  const std::size_t m = cfg.op->num_blocks();
  if (x_star.size() != cfg.op->dim())
    throw std::invalid_argument("verify_linear_rate: x_star has wrong size");

  LinearRateReport rep;
  rep.bounds = linear_rate_steps(rho > 0.0 ? rho : default_rho(setup.tau), beta, mu, setup.tau, m,
                                 setup.probs.p_min());
  rep.eta = setup.eta;
  rep.seeds = seeds;
  rep.slack = slack;
  if (rep.eta > rep.bounds.eta() * (1.0 + 1e-12))
    throw std::invalid_argument("verify_linear_rate: step " + std::to_string(rep.eta) +
                                " exceeds min(eta1, eta2) = " + std::to_string(rep.bounds.eta()));

  const std::size_t rows = cfg.epochs + 1;
  std::vector<double> sum(rows, 0.0), sum_sq(rows, 0.0);
  SimRun run = cfg;
  run.x_star = Vec(x_star.begin(), x_star.end());
  run.track_xi = false;
  run.track_objective = false;
  run.record_trace = false;
  for (std::size_t s = 0; s < seeds; ++s) {
    run.seed = cfg.seed + s;
    const RunMetrics r = run_simulation(run);
    if (r.rows.size() != rows)
      throw std::runtime_error("verify_linear_rate: run diverged under seed " +
                               std::to_string(run.seed));
    for (std::size_t e = 0; e < rows; ++e) {
      const double v = *r.rows[e].dist_sq;
      sum[e] += v;
      sum_sq[e] += v * v;
    }
  }

  const double n = static_cast<double>(seeds);
  const double base = 1.0 - beta * mu * rep.eta / static_cast<double>(m);
  const double d0 = dist_sq(setup.x0, x_star);
  for (std::size_t e = 0; e < rows; ++e) {
    const std::size_t k = e * m;
    const double mean = sum[e] / n;
    const double var = seeds > 1 ? std::max(0.0, (sum_sq[e] - n * mean * mean) / (n - 1.0)) : 0.0;
    const double env = std::pow(base, static_cast<double>(k)) * d0;
    rep.ks.push_back(k);
    rep.mean_dist_sq.push_back(mean);
    rep.std_error.push_back(std::sqrt(var / n));
    rep.envelope.push_back(env);
    const double ratio = env > 0.0 ? mean / env : (mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
  }
  return rep;
}

}  // namespace arock
