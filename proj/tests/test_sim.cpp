#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <sstream>

#include "arock/core/step_size.hpp"
#include "arock/core/update.hpp"
#include "arock/io/generators.hpp"
#include "arock/ops/jacobi.hpp"
#include "arock/sim/delay.hpp"
#include "arock/sim/history.hpp"
#include "arock/sim/simulator.hpp"
#include "arock/sim/verify.hpp"
#include "support.hpp"

using namespace arock;

namespace {

bool same_bits(const Vec& a, const Vec& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

IterateHistory random_history(std::size_t n, std::size_t tau, std::size_t steps, std::uint64_t seed) {
  Rng rng = make_stream_rng(seed, 0);
  std::normal_distribution<double> g;
  Vec x0(n);
  for (double& v : x0) v = g(rng);
  IterateHistory h(x0, tau, BlockLayout::scalar(n));
  for (std::size_t s = 0; s < steps; ++s) h.push(rng() % n, Vec{g(rng)});
  return h;
}

std::string csv_of(const RunMetrics& m) {
  std::ostringstream out;
  write_csv_rows(out, m);
  return out.str();
}

}  // namespace

TEST_CASE("reconstruct_xhat") {
  const std::size_t tau = 4;
  const IterateHistory h = random_history(6, tau, 20, 1);
  const std::int64_t k = h.step();
  CHECK(same_bits(reconstruct_xhat(h, k, {}), h.current()));
  const std::vector<std::int64_t> full{k - 4, k - 3, k - 2, k - 1};
  CHECK(same_bits(reconstruct_xhat(h, k, full), h.iterate(k - 4)));
  const std::vector<std::int64_t> suffix{k - 2, k - 1};
  CHECK(same_bits(reconstruct_xhat(h, k, suffix), h.iterate(k - 2)));
  CHECK_THROWS(reconstruct_xhat(h, k, std::vector<std::int64_t>{k - 5}));
  CHECK_THROWS(reconstruct_xhat(h, k, std::vector<std::int64_t>{k}));
  CHECK_THROWS(reconstruct_xhat(h, k - 1, {}));
}

TEST_CASE("history pads with x0 before the first step") {
  IterateHistory h(Vec{1.0, 2.0}, 3, BlockLayout::scalar(2));
  CHECK(h.iterate(-2) == Vec{1.0, 2.0});
  h.push(1, Vec{0.5});
  CHECK(h.window().size() == 4);
  CHECK(h.window().front() == Vec{1.0, 2.0});
  CHECK(h.current() == Vec{1.0, 2.5});
  CHECK(h.record(-1) == nullptr);
}

TEST_CASE("four-coordinate stale read") {
  // x^0 = 0; step 0 adds 1 to the first coordinate, step 1 adds 2 to the last.
  IterateHistory h(Vec(4, 0.0), 2, BlockLayout::scalar(4));
  h.push(0, Vec{1.0});
  h.push(3, Vec{2.0});
  const std::int64_t k = h.step();
  const Vec target{0.0, 0.0, 0.0, 2.0};
  CHECK(reconstruct_xhat(h, k, std::vector<std::int64_t>{0}) == target);
  const auto incons = possible_reads(h, k, 2, ReadMode::inconsistent);
  CHECK(std::find(incons.begin(), incons.end(), target) != incons.end());
  const auto cons = possible_reads(h, k, 2, ReadMode::consistent);
  CHECK(std::find(cons.begin(), cons.end(), target) == cons.end());
  CHECK(cons.size() == 3);
}

TEST_CASE("delay windows stay inside the history") {
  const std::size_t tau = 5;
  const std::vector<DelayPolicy> policies{DelayPolicy::none(), DelayPolicy::fixed(3),
                                          DelayPolicy::uniform_random(tau),
                                          DelayPolicy::adversarial_max(tau),
                                          DelayPolicy::per_coordinate({0, 1, 2, 3, 4, 5})};
  for (const auto& policy : policies) {
    for (ReadMode mode : {ReadMode::inconsistent, ReadMode::consistent}) {
      IterateHistory h(Vec(6, 0.0), policy.bound(), BlockLayout::scalar(6));
      Rng rng = make_stream_rng(3, kDelayStream);
      for (int step = 0; step < 300; ++step) {
        const auto J = policy.generate(h, mode, rng);
        CHECK(std::is_sorted(J.begin(), J.end()));
        CHECK(J.size() <= policy.bound());
        for (std::int64_t d : J) {
          CHECK(d < h.step());
          CHECK(d >= h.step() - static_cast<std::int64_t>(policy.bound()));
        }
        if (mode == ReadMode::consistent && !J.empty()) {
          CHECK(J.back() == h.step() - 1);
          CHECK(J.back() - J.front() + 1 == static_cast<std::int64_t>(J.size()));
          const Vec xhat = reconstruct_xhat(h, h.step(), J);
          CHECK(same_bits(xhat, h.iterate(J.front())));
        }
        h.push(static_cast<std::size_t>(step) % 6, Vec{1.0 + step});
      }
    }
  }
  const IterateHistory h = random_history(4, 4, 10, 2);
  Rng rng = make_stream_rng(1, 0);
  const auto J = DelayPolicy::adversarial_max(4).generate(h, ReadMode::inconsistent, rng);
  CHECK(J.size() == 4);
}

TEST_CASE("jacobi simulation converges to the direct solution") {
  LinearSystem sys = gen_diag_dominant(40, 4, 3);
  const JacobiOp op(sys.A, sys.b);
  SimRun cfg;
  cfg.op = &op;
  cfg.delay = DelayPolicy::none();
  cfg.step = StepSizePolicy::fejer(0.9);
  cfg.epochs = 150;
  cfg.seed = 4;
  cfg.x_star = oracle::solve(sys.A, sys.b);
  const RunMetrics m = run_simulation(cfg);
  CHECK(op.linear_residual(m.final_x) < 1e-10);
  CHECK(*m.rows.back().dist_sq < 1e-20);
  CHECK(m.rows.size() == 151);
  for (std::size_t e = 1; e < m.rows.size(); ++e) CHECK(m.rows[e].epoch == m.rows[e - 1].epoch + 1);
}

TEST_CASE("tau = 0 simulation equals serial randomized KM bitwise") {
  LinearSystem sys = gen_diag_dominant(25, 3, 5);
  const JacobiOp op(sys.A, sys.b);
  SimRun cfg;
  cfg.op = &op;
  cfg.step = StepSizePolicy::constant(0.8);
  cfg.epochs = 4;
  cfg.seed = 17;
  cfg.record_trace = true;
  const RunMetrics m = run_simulation(cfg);

  const auto p = SamplingDistribution::uniform(25);
  Rng rng = make_stream_rng(17, 0);
  Vec x(25, 0.0);
  REQUIRE(m.trace.size() == 100);
  for (std::size_t k = 0; k < 100; ++k) {
    x = arock_update(x, x, p.sample(rng), 0.8, p, op);
    CHECK(same_bits(x, m.trace[k]));
  }
}

TEST_CASE("simulation is reproducible") {
  LinearSystem sys = gen_diag_dominant(30, 3, 6);
  const JacobiOp op(sys.A, sys.b);
  SimRun cfg;
  cfg.op = &op;
  cfg.delay = DelayPolicy::uniform_random(6);
  cfg.epochs = 20;
  cfg.seed = 9;
  cfg.x_star = sys.x_star;
  const std::string a = csv_of(run_simulation(cfg));
  CHECK(a == csv_of(run_simulation(cfg)));
  cfg.seed = 10;
  CHECK(a != csv_of(run_simulation(cfg)));
}

TEST_CASE("oversized steps only warn") {
  LinearSystem sys = gen_diag_dominant(10, 2, 1);
  const JacobiOp op(sys.A, sys.b);
  SimRun cfg;
  cfg.op = &op;
  cfg.delay = DelayPolicy::adversarial_max(8);
  cfg.step = StepSizePolicy::constant(5.0);
  cfg.epochs = 1;
  const SimSetup s = prepare_simulation(cfg);
  CHECK_FALSE(s.warnings.empty());
  CHECK_NOTHROW(run_simulation(cfg));
}

TEST_CASE("adversarial delays: mean xi is non-increasing") {
  LinearSystem sys = gen_diag_dominant(20, 3, 7);
  const JacobiOp op(sys.A, sys.b);
  const std::size_t epochs = 60, seeds = 200;
  std::vector<double> mean_xi(epochs + 1, 0.0);
  double final_dist = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    SimRun cfg;
    cfg.op = &op;
    cfg.delay = DelayPolicy::adversarial_max(8);
    cfg.step = StepSizePolicy::fejer(0.9);
    cfg.epochs = epochs;
    cfg.seed = 100 + s;
    cfg.x0 = Vec(20, 1.0);
    cfg.x_star = sys.x_star;
    const RunMetrics m = run_simulation(cfg);
    for (std::size_t e = 0; e <= epochs; ++e) mean_xi[e] += *m.rows[e].xi / seeds;
    final_dist += *m.rows.back().dist_sq / seeds;
  }
  for (std::size_t e = 1; e <= epochs; ++e) CHECK(mean_xi[e] <= mean_xi[e - 1]);
  CHECK(final_dist < 1e-2 * mean_xi[0]);
}

TEST_CASE("sync sweeps match km_step") {
  LinearSystem sys = gen_diag_dominant(15, 2, 8);
  const JacobiOp op(sys.A, sys.b);
  Vec x(15, 0.5);
  const Vec swept = simulate_sync_sweeps(op, x, 0.7, 6);
  for (int k = 0; k < 6; ++k) x = km_step(x, 0.7, op);
  CHECK(same_bits(swept, x));
}

TEST_CASE("fundamental inequality checks") {
  LinearSystem sys = gen_diag_dominant(20, 3, 11);
  const JacobiOp op(sys.A, sys.b);
  SimRun cfg;
  cfg.op = &op;
  cfg.seed = 2;
  cfg.x0 = Vec(20, 2.0);

  SUBCASE("tau = 0, small step: positive slack") {
    cfg.step = StepSizePolicy::constant(0.1);
    const auto r = verify_fundamental_inequality(cfg, sys.x_star, 100, 30);
    CHECK(r.guaranteed);
    CHECK(r.exact);
    CHECK(r.passed());
    for (const auto& s : r.steps) CHECK(s.margin >= 0.0);
  }
  SUBCASE("tau = 4 at half the safe step") {
    cfg.delay = DelayPolicy::uniform_random(4);
    cfg.step = StepSizePolicy::constant(0.5 * fejer_safe_step(20, 0.05, 4, 0.999999));
    const auto r = verify_fundamental_inequality(cfg, sys.x_star, 200, 50, 0);
    CHECK_FALSE(r.exact);
    CHECK(r.guaranteed);
    CHECK(r.violations == 0);
  }
  SUBCASE("ten times the bound loses the guarantee") {
    cfg.delay = DelayPolicy::uniform_random(4);
    cfg.step = StepSizePolicy::constant(10.0 * fejer_safe_step(20, 0.05, 4, 0.999999));
    const auto r = verify_fundamental_inequality(cfg, sys.x_star, 50, 5);
    CHECK(r.coefficient < 0.0);
    CHECK_FALSE(r.guaranteed);
  }
  SUBCASE("too few trials") {
    CHECK_THROWS(verify_fundamental_inequality(cfg, sys.x_star, 29, 5));
  }
}

TEST_CASE("linear rate envelope") {
  LinearSystem sys = gen_diag_dominant(20, 3, 12, 0.5);
  const JacobiOp op(sys.A, sys.b);
  const double mu = 1.0 - oracle::jacobi_norm(sys.A);
  SimRun cfg;
  cfg.op = &op;
  cfg.delay = DelayPolicy::uniform_random(2);
  cfg.step = StepSizePolicy::linear_rate(mu, 0.5);
  cfg.epochs = 10;
  cfg.seed = 1;
  cfg.x0 = Vec(20, 1.0);
  const auto r = verify_linear_rate(cfg, sys.x_star, mu, 0.5, 100);
  REQUIRE_FALSE(r.ks.empty());
  CHECK(r.ks.front() == 0);
  CHECK(r.envelope.front() == dist_sq(cfg.x0, sys.x_star));
  CHECK(r.mean_dist_sq.front() == doctest::Approx(r.envelope.front()).epsilon(1e-14));
  CHECK(r.passed());
  CHECK_THROWS(verify_linear_rate(cfg, sys.x_star, 0.0, 0.5, 10));

  // tau = 0, eta = 1: randomized coordinate descent under its envelope
  cfg.delay = DelayPolicy::none();
  cfg.step = StepSizePolicy::constant(std::min(1.0, linear_rate_steps(default_rho(0), 0.5, mu, 0, 20, 0.05).eta()));
  CHECK(verify_linear_rate(cfg, sys.x_star, mu, 0.5, 100).passed());
}
