#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "arock/core/checks.hpp"
#include "arock/core/sampling.hpp"
#include "arock/engine/engine.hpp"
#include "arock/io/libsvm.hpp"
#include "arock/sim/verify.hpp"

namespace arock::cli {
namespace {

using nlohmann::json;

/// Property-check failure; maps to exit code 2.
struct PropertyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw DataError("cannot open output file '" + path + "'");
    os_ = &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

/// "out.csv" -> "out.sync.csv"
std::string sibling_path(const std::string& path, const std::string& tag) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "." + tag;
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

json common_json(const CommonConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["epochs"] = c.epochs;
  j["step"] = c.step;
  j["eta_flag"] = c.eta;
  j["c"] = c.c;
  j["beta"] = c.beta;
  j["mu_flag"] = c.mu;
  j["seed"] = c.seed;
  j["oracle"] = c.oracle;
  return j;
}

void write_header(std::ostream& os, const json& config, const std::vector<std::string>& warnings) {
  os << "# config: " << config.dump() << '\n';
  for (const auto& w : warnings) os << "# warning: " << w << '\n';
}

double problem_mu(const CommonConfig& c, const Problem& pr) {
  if (c.mu > 0.0) return c.mu;
  if (pr.mu) return *pr.mu;
  throw std::invalid_argument("the linear-rate step needs a strong monotonicity modulus: pass --mu");
}

StepSizePolicy make_step(const CommonConfig& c, const Problem& pr) {
  if (c.step == "constant" || (c.step == "auto" && c.eta > 0.0)) {
    if (!(c.eta > 0.0)) throw std::invalid_argument("--step constant needs --eta > 0");
    return StepSizePolicy::constant(c.eta);
  }
  if (c.step == "fejer" || c.step == "auto") {
    if (!(c.c > 0.0 && c.c < 1.0)) throw std::invalid_argument("--c must lie in (0, 1)");
    return StepSizePolicy::fejer(c.c);
  }
  if (c.step == "linear") return StepSizePolicy::linear_rate(problem_mu(c, pr), c.beta);
  throw std::invalid_argument("unknown step policy '" + c.step + "' (auto, constant, fejer, linear)");
}

DelayPolicy make_delay(const std::string& name, std::size_t tau, std::size_t blocks) {
  switch (parse_delay_kind(name)) {
    case DelayPolicy::Kind::none:
      if (tau != 0) throw std::invalid_argument("--policy none requires --tau 0");
      return DelayPolicy::none();
    case DelayPolicy::Kind::fixed: return DelayPolicy::fixed(tau);
    case DelayPolicy::Kind::uniform_random: return DelayPolicy::uniform_random(tau);
    case DelayPolicy::Kind::adversarial_max: return DelayPolicy::adversarial_max(tau);
    case DelayPolicy::Kind::per_coordinate: {
      // Lags cycle 0, 1, ..., tau over the blocks.
      std::vector<std::size_t> lags(blocks);
      for (std::size_t b = 0; b < blocks; ++b) lags[b] = b % (tau + 1);
      return DelayPolicy::per_coordinate(std::move(lags));
    }
  }
  throw std::invalid_argument("unknown delay policy");
}

ReadMode parse_read_mode(const std::string& s) {
  if (s == "inconsistent") return ReadMode::inconsistent;
  if (s == "consistent") return ReadMode::consistent;
  throw std::invalid_argument("--read must be inconsistent or consistent");
}

const Vec& require_oracle(const Problem& pr, const char* what) {
  if (!pr.x_star)
    throw std::invalid_argument(std::string(what) + " needs a reference solution; this problem has none");
  return *pr.x_star;
}

void write_inequality(std::ostream& os, const InequalityReport& r, const char* prefix) {
  os << prefix << "k,xi,expected_lhs,gap_sq,margin,std_error,violated\n";
  for (const auto& s : r.steps)
    os << prefix << s.k << ',' << s.xi << ',' << s.expected_lhs << ',' << s.gap_sq << ','
       << s.margin << ',' << s.std_error << ',' << (s.violated ? 1 : 0) << '\n';
}

void write_linear(std::ostream& os, const LinearRateReport& r, const char* prefix) {
  os << prefix << "k,mean_dist_sq,std_error,envelope\n";
  for (std::size_t i = 0; i < r.ks.size(); ++i)
    os << prefix << r.ks[i] << ',' << r.mean_dist_sq[i] << ',' << r.std_error[i] << ','
       << r.envelope[i] << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const PropertyFailure& e) {
    err << "property check failed: " << e.what() << '\n';
    return kPropertyFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const bool checking = cfg.verify != "none";
    if (checking && cfg.verify != "fundamental" && cfg.verify != "linear")
      throw std::invalid_argument("--verify must be none, fundamental or linear");
    Problem pr = build_problem(cfg.common.problem, cfg.common.oracle || checking);
    CommonConfig common = cfg.common;
    if (cfg.verify == "linear" && common.step == "auto") common.step = "linear";

    SimRun run;
    run.op = pr.op.get();
    run.step = make_step(common, pr);
    run.delay = make_delay(cfg.policy, cfg.tau, pr.op->num_blocks());
    run.read_mode = parse_read_mode(cfg.read);
    run.epochs = common.epochs;
    run.seed = common.seed;
    run.x0 = pr.x0;
    run.x_star = pr.x_star;
    run.track_xi = pr.x_star.has_value();

    const SimSetup setup = prepare_simulation(run);
    json config = common_json(common);
    config["command"] = "simulate";
    config["tau"] = cfg.tau;
    config["policy"] = run.delay.describe();
    config["read"] = cfg.read;
    config["eta"] = setup.eta;
    config["blocks"] = pr.op->num_blocks();
    config["verify"] = cfg.verify;

    RunMetrics metrics = run_simulation(run);
    std::vector<std::string> warnings = pr.warnings;
    warnings.insert(warnings.end(), metrics.warnings.begin(), metrics.warnings.end());
    metrics.warnings.clear();

    Sink sink(cfg.common.output, out);
    write_header(*sink, config, warnings);
    write_csv_rows(*sink, metrics);
    write_csv_summary(*sink, metrics);
    if (!checking) return kOk;

    const Vec& x_star = require_oracle(pr, "--verify");
    bool passed = true;
    std::unique_ptr<Sink> detail;
    if (!cfg.verify_out.empty()) detail = std::make_unique<Sink>(cfg.verify_out, out);
    const char* prefix = detail ? "" : "# ";
    std::ostream& dos = detail ? **detail : *sink;
    if (cfg.verify == "fundamental") {
      const std::size_t total = common.epochs * pr.op->num_blocks();
      const std::size_t steps = cfg.verify_steps ? std::min(cfg.verify_steps, total) : total;
      const InequalityReport r = verify_fundamental_inequality(run, x_star, cfg.trials, steps);
      *sink << "# fundamental_inequality: passed=" << r.passed() << " violations=" << r.violations
            << " steps=" << r.steps.size() << " coefficient=" << r.coefficient
            << " exact=" << r.exact << " worst_margin_ratio=" << r.worst_margin_ratio << '\n';
      if (!r.guaranteed)
        *sink << "# warning: negative coefficient, the inequality carries no decrease\n";
      write_inequality(dos, r, prefix);
      passed = r.passed();
    } else {
      const LinearRateReport r =
          verify_linear_rate(run, x_star, problem_mu(common, pr), common.beta, cfg.seeds);
      *sink << "# linear_rate: passed=" << r.passed() << " worst_ratio=" << r.worst_ratio
            << " eta=" << r.eta << " eta1=" << r.bounds.eta1 << " eta2=" << r.bounds.eta2
            << " seeds=" << r.seeds << '\n';
      write_linear(dos, r, prefix);
      passed = r.passed();
    }
    if (!passed) throw PropertyFailure("--verify " + cfg.verify);
    return kOk;
  });
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (!cfg.baseline.empty() && cfg.baseline != "sync")
      throw std::invalid_argument("--baseline only accepts 'sync'");
    if (cfg.agents == 0) throw std::invalid_argument("--agents must be at least 1");
    Problem pr = build_problem(cfg.common.problem, cfg.common.oracle);

    EngineConfig e;
    e.agents = cfg.agents;
    e.epochs = cfg.common.epochs;
    e.step = make_step(cfg.common, pr);
    e.assumed_tau = cfg.assumed_tau;
    if (!cfg.scheme.empty()) e.scheme = parse_block_scheme(cfg.scheme);
    e.seed = cfg.common.seed;
    e.x0 = pr.x0;
    e.x_star = pr.x_star;
    e.record_orders = cfg.record_orders;

    json config = common_json(cfg.common);
    config["command"] = "run";
    config["agents"] = cfg.agents;
    config["scheme"] = to_string(e.scheme.value_or(default_scheme(pr.op->layout())));
    config["assumed_tau"] = e.assumed_tau.value_or(cfg.agents - 1);
    config["step_policy"] = e.step.describe();
    config["blocks"] = pr.op->num_blocks();
    config["baseline"] = cfg.baseline;

    RunMetrics metrics = run_engine(e, *pr.op);
    config["eta"] = metrics.eta;
    Sink sink(cfg.common.output, out);
    write_header(*sink, config, pr.warnings);
    write_csv_rows(*sink, metrics);
    write_csv_summary(*sink, metrics);

    if (cfg.baseline == "sync") {
      RunMetrics sync = run_sync_baseline(e, *pr.op);
      config["mode"] = "sync";
      const bool to_stdout = cfg.common.output.empty() || cfg.common.output == "-";
      Sink sync_sink(to_stdout ? std::string() : sibling_path(cfg.common.output, "sync"), out);
      if (to_stdout) *sync_sink << "# --- synchronous baseline ---\n";
      write_header(*sync_sink, config, {});
      write_csv_rows(*sync_sink, sync);
      write_csv_summary(*sync_sink, sync);
    }
    return kOk;
  });
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Problem pr = build_problem(cfg.common.problem, true);
    const ProblemOperator& op = *pr.op;
    if (op.dim() > cfg.max_dim)
      throw std::invalid_argument("verify is capped at dimension " + std::to_string(cfg.max_dim) +
                                  " (problem has " + std::to_string(op.dim()) +
                                  "); raise --max-dim to override");
    if (cfg.samples == 0) throw std::invalid_argument("--samples must be positive");

    json config = common_json(cfg.common);
    config["command"] = "verify";
    config["tau"] = cfg.tau;
    config["samples"] = cfg.samples;
    config["trials"] = cfg.trials;
    config["steps"] = cfg.steps;
    config["seeds"] = cfg.seeds;
    Sink sink(cfg.common.output, out);
    write_header(*sink, config, pr.warnings);
    *sink << "property,status,value,threshold,detail\n";

    bool all = true;
    auto report = [&](const char* name, const char* status, double value, double threshold,
                      const std::string& detail) {
      *sink << name << ',' << status << ',' << value << ',' << threshold << ',' << detail << '\n';
      if (std::string(status) == "fail") all = false;
    };

    Rng rng = make_stream_rng(cfg.common.seed, kCheckStream);
    const Vec center = pr.x_star.value_or(pr.x0);
    const CocoercivityReport coco = check_cocoercivity(op, cfg.samples, rng, 1.0, 1e-9, center);
    report("cocoercivity", coco.passed() ? "pass" : "fail", coco.worst_scaled_margin, -1e-9,
           "violations=" + std::to_string(coco.violations));

    if (!pr.x_star) {
      report("quasi_contraction", "skip", 0, 0, "no reference solution");
      report("fundamental_inequality", "skip", 0, 0, "no reference solution");
      report("linear_rate", "skip", 0, 0, "no reference solution");
    } else {
      const Vec& x_star = *pr.x_star;
      // Any nonexpansive T is quasi-nonexpansive (bound 1); tighter when known.
      const double bound = pr.contraction_bound.value_or(1.0);
      const ContractionReport qc = measure_contraction(op, x_star, cfg.samples, rng);
      const bool qc_ok = qc.max_factor <= bound * (1.0 + 1e-9) + 1e-12;
      report("quasi_contraction", qc_ok ? "pass" : "fail", qc.max_factor, bound,
             "mean=" + std::to_string(qc.mean_factor));

      SimRun run;
      run.op = &op;
      run.step = StepSizePolicy::fejer(cfg.common.c);
      run.delay = DelayPolicy::uniform_random(cfg.tau);
      run.seed = cfg.common.seed;
      run.x0 = pr.x0;
      run.x_star = x_star;
      run.epochs = cfg.steps / op.num_blocks() + 1;
      const InequalityReport ineq = verify_fundamental_inequality(run, x_star, cfg.trials, cfg.steps);
      report("fundamental_inequality", ineq.passed() ? "pass" : "fail", ineq.worst_margin_ratio, -1.0,
             "violations=" + std::to_string(ineq.violations) +
                 (ineq.guaranteed ? "" : " coefficient<0"));

      const std::optional<double> mu = cfg.common.mu > 0.0 ? std::optional(cfg.common.mu) : pr.mu;
      if (!mu) {
        report("linear_rate", "skip", 0, 0, "no strong monotonicity modulus");
      } else {
        run.step = StepSizePolicy::linear_rate(*mu, cfg.common.beta);
        run.epochs = cfg.common.epochs;
        const LinearRateReport lr = verify_linear_rate(run, x_star, *mu, cfg.common.beta, cfg.seeds);
        report("linear_rate", lr.passed() ? "pass" : "fail", lr.worst_ratio, 1.0 + lr.slack,
               "eta=" + std::to_string(lr.eta));
      }
    }
    return all ? kOk : kPropertyFailure;
  });
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (cfg.agents.empty()) throw std::invalid_argument("--agents needs at least one count");
    for (std::size_t a : cfg.agents)
      if (a == 0) throw std::invalid_argument("agent counts must be positive");
    Problem pr = build_problem(cfg.common.problem, false);
    EngineConfig base;
    base.epochs = cfg.common.epochs;
    base.step = make_step(cfg.common, pr);
    base.seed = cfg.common.seed;
    base.x0 = pr.x0;
    base.track_objective = false;
    base.snapshot_every = cfg.common.epochs;
    if (!cfg.scheme.empty()) base.scheme = parse_block_scheme(cfg.scheme);

    json config = common_json(cfg.common);
    config["command"] = "bench";
    config["agents"] = cfg.agents;
    config["sync"] = cfg.sync;
    const auto rows = measure_speedup(pr.label, *pr.op, base, cfg.agents, cfg.sync);
    Sink sink(cfg.common.output, out);
    write_header(*sink, config, pr.warnings);
    write_speedup_csv(*sink, rows);
    return kOk;
  });
}

namespace {

void add_common(CLI::App* sub, CommonConfig& c) {
  ProblemSpec& p = c.problem;
  sub->add_option("--problem", p.kind, "Problem kind")
      ->check(CLI::IsMember(problem_kinds()))
      ->capture_default_str();
  sub->add_option("--n", p.n, "Dimension for jacobi/quadratic/expansive")->capture_default_str();
  sub->add_option("--bandwidth", p.bandwidth, "Band half-width of the generated system")
      ->capture_default_str();
  sub->add_option("--dominance", p.dominance, "Diagonal dominance margin")->capture_default_str();
  sub->add_option("--data", p.data, "LIBSVM file or dataset name under $AROCK_DATA_DIR");
  sub->add_option("--samples", p.samples, "Generated samples")->capture_default_str();
  sub->add_option("--features", p.features, "Generated features")->capture_default_str();
  sub->add_option("--density", p.density, "Generated nonzero density")->capture_default_str();
  sub->add_option("--lambda", p.lambda, "l1 weight")->capture_default_str();
  sub->add_option("--gamma", p.gamma, "Operator parameter (forward step, ADMM penalty)");
  sub->add_option("--gamma-scale", p.gamma_scale, "Forward step as a multiple of 1/L");
  sub->add_option("--block-size", p.block_target, "Coordinates per block (0 = scalar)");
  sub->add_option("--graph", p.graph, "Graph kind for network problems")->capture_default_str();
  sub->add_option("--nodes", p.nodes, "Agents / sets in network problems")->capture_default_str();
  sub->add_option("--dim", p.dim, "Per-node dimension")->capture_default_str();
  sub->add_option("--admm-mode", p.admm_mode, "agent or edge")->capture_default_str();
  sub->add_option("--imbalance", p.imbalance, "Density multiplier of the first block")
      ->capture_default_str();
  sub->add_option("--problem-seed", p.seed, "Seed for generated data")->capture_default_str();
  sub->add_option("--epochs", c.epochs, "Epochs of m block updates")->capture_default_str();
  sub->add_option("--step", c.step, "auto, constant, fejer or linear")->capture_default_str();
  sub->add_option("--eta", c.eta, "Constant step size");
  sub->add_option("--c", c.c, "Safety factor of the Fejer step")->capture_default_str();
  sub->add_option("--beta", c.beta, "Linear-rate beta")->capture_default_str();
  sub->add_option("--mu", c.mu, "Strong monotonicity modulus override");
  sub->add_option("--seed", c.seed, "Run seed")->capture_default_str();
  sub->add_option("-o,--output", c.output, "Output CSV path (default stdout)");
  sub->add_flag("!--no-oracle", c.oracle, "Skip the serial reference solve");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asynchronous block-coordinate fixed-point solver"};
  app.require_subcommand(1);

  SimulateConfig sim;
  auto* s = app.add_subcommand("simulate", "Single-threaded run under a delay model");
  add_common(s, sim.common);
  s->add_option("--tau", sim.tau, "Delay bound")->capture_default_str();
  s->add_option("--policy", sim.policy, "none, fixed, uniform, adversarial, per_coordinate")
      ->capture_default_str();
  s->add_option("--read", sim.read, "inconsistent or consistent")->capture_default_str();
  s->add_option("--verify", sim.verify, "none, fundamental or linear")->capture_default_str();
  s->add_option("--trials", sim.trials, "Monte Carlo draws per step")->capture_default_str();
  s->add_option("--verify-steps", sim.verify_steps, "Steps to check (0 = all)");
  s->add_option("--seeds", sim.seeds, "Trajectories for the linear-rate check")->capture_default_str();
  s->add_option("--verify-out", sim.verify_out, "Per-step check table path");

  RunConfig run;
  auto* r = app.add_subcommand("run", "Multithreaded asynchronous run");
  add_common(r, run.common);
  r->add_option("--agents", run.agents, "Worker threads")->capture_default_str();
  r->add_option("--scheme", run.scheme, "atomic_scalar, dual_copy or per_block_lock");
  r->add_option("--baseline", run.baseline, "Also run the synchronous baseline ('sync')");
  r->add_option("--assumed-tau", run.assumed_tau, "Delay bound for the step (default agents-1)");
  r->add_flag("--record-orders", run.record_orders, "Keep sampled and committed block orders");

  VerifyConfig ver;
  auto* v = app.add_subcommand("verify", "Property checks against oracles");
  add_common(v, ver.common);
  v->add_option("--max-dim", ver.max_dim, "Dimension cap")->capture_default_str();
  v->add_option("--check-samples", ver.samples, "Random pairs/points per check")->capture_default_str();
  v->add_option("--tau", ver.tau, "Delay bound for the inequality check")->capture_default_str();
  v->add_option("--trials", ver.trials, "Monte Carlo draws per step")->capture_default_str();
  v->add_option("--steps", ver.steps, "Inequality steps")->capture_default_str();
  v->add_option("--seeds", ver.seeds, "Linear-rate trajectories")->capture_default_str();

  BenchConfig bench;
  auto* b = app.add_subcommand("bench", "Wall time and speedup over agent counts");
  add_common(b, bench.common);
  b->add_option("--agents", bench.agents, "Agent counts")->delimiter(',')->capture_default_str();
  b->add_flag("!--no-sync", bench.sync, "Skip the synchronous baseline");
  b->add_option("--scheme", bench.scheme, "Block scheme");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  if (s->parsed()) return cmd_simulate(sim, out, err);
  if (r->parsed()) return cmd_run(run, out, err);
  if (v->parsed()) return cmd_verify(ver, out, err);
  return cmd_bench(bench, out, err);
}

}  // namespace arock::cli
