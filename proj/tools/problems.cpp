#include "problems.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "arock/core/sampling.hpp"
#include "arock/core/step_size.hpp"
#include "arock/core/update.hpp"
#include "arock/io/generators.hpp"
#include "arock/io/graph.hpp"
#include "arock/io/libsvm.hpp"
#include "arock/ops/consensus_admm.hpp"
#include "arock/ops/decentral_admm.hpp"
#include "arock/ops/decentral_grad.hpp"
#include "arock/ops/fbs.hpp"
#include "arock/ops/grad.hpp"
#include "arock/ops/jacobi.hpp"
#include "arock/ops/prs.hpp"
#include "arock/ops/simple.hpp"

namespace arock::cli {
namespace {

constexpr std::size_t kOracleLimit = 5000;

// Averaged (alpha = 1/2) iteration: plain iteration of a merely nonexpansive
// T, as in the splitting operators, can cycle.
Vec serial_oracle(const ProblemOperator& op, const Vec& x0, double alpha = 0.5,
                  double tol = 1e-12) {
  const SerialSolve s = solve_fixed_point(op, x0, alpha, tol, 500000);
  if (!s.converged)
    throw std::runtime_error(op.name() + ": serial oracle stalled at residual " +
                             std::to_string(s.residual));
  return s.x;
}

BlockLayout layout_for(std::size_t n, std::size_t target) {
  return target > 0 ? partition_blocks(n, target) : BlockLayout::scalar(n);
}

LabeledDataset load_or_generate(const ProblemSpec& spec, std::vector<std::string>& warnings) {
  if (!spec.data.empty()) return read_libsvm(resolve_data_path(spec.data), &warnings);
  LogisticDataOptions opt;
  opt.samples = spec.samples;
  opt.features = spec.features;
  opt.density = spec.density;
  opt.seed = spec.seed;
  if (spec.imbalance != 1.0) {
    opt.dense_block_size = spec.block_target > 0 ? spec.block_target : 1;
    opt.dense_multiplier = spec.imbalance;
  }
  return gen_logistic_dataset(opt);
}

std::vector<LocalQuadratic> random_locals(std::size_t m, std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> curv(0.5, 2.0);
  std::normal_distribution<double> normal;
  std::vector<LocalQuadratic> out;
  for (std::size_t i = 0; i < m; ++i) {
    LocalQuadratic f;
    f.Q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    f.c.resize(static_cast<Eigen::Index>(d));
    for (Eigen::Index a = 0; a < f.c.size(); ++a) {
      f.Q(a, a) = curv(rng);
      f.c[a] = normal(rng);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ConvexTerm> as_terms(const std::vector<LocalQuadratic>& locals) {
  std::vector<ConvexTerm> out;
  for (const auto& f : locals) out.emplace_back(QuadraticTerm{f.Q, -f.c});
  return out;
}

}  // namespace

const std::vector<std::string>& problem_kinds() {
  static const std::vector<std::string> kinds = {
      "jacobi",    "quadratic", "logistic",       "lasso",          "feasibility",
      "consensus", "decentral-admm", "decentral-grad", "expansive"};
  return kinds;
}

std::string resolve_data_path(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(name)) return name;
  if (const char* dir = std::getenv("AROCK_DATA_DIR")) {
    for (const char* ext : {"", ".libsvm", ".svm", ".txt"}) {
      const fs::path p = fs::path(dir) / (name + ext);
      if (fs::is_regular_file(p)) return p.string();
    }
  }
  throw DataError("dataset '" + name + "' not found (checked the path and AROCK_DATA_DIR)");
}

Problem build_problem(const ProblemSpec& spec, bool want_oracle) {
  Problem pr;
  pr.label = spec.kind;
  Rng rng = make_stream_rng(spec.seed, 7);
  std::normal_distribution<double> normal;

  if (spec.kind == "jacobi" || spec.kind == "quadratic") {
    if (spec.n == 0) throw std::invalid_argument("--n must be positive");
    LinearSystem sys = gen_diag_dominant(spec.n, spec.bandwidth, spec.seed, spec.dominance);
    pr.x0.assign(spec.n, 0.0);
    pr.x_star = sys.x_star;
    if (spec.kind == "jacobi") {
      auto op = std::make_unique<JacobiOp>(std::move(sys.A), std::move(sys.b),
                                           layout_for(spec.n, spec.block_target));
      pr.warnings = op->warnings();
      if (op->iteration_norm() < 1.0)
        pr.mu = strong_monotonicity_from_lipschitz(op->iteration_norm());
      pr.contraction_bound = op->iteration_norm();
      pr.op = std::move(op);
    } else {
      pr.op = std::make_unique<GradOp>(GradOp::quadratic(std::move(sys.A), std::move(sys.b),
                                                         layout_for(spec.n, spec.block_target)));
    }
    return pr;
  }

  if (spec.kind == "logistic" || spec.kind == "lasso") {
    LabeledDataset data = load_or_generate(spec, pr.warnings);
    const std::size_t n = data.num_features();
    const BlockLayout layout = layout_for(n, spec.block_target);
    auto make = [&](double gamma) {
      if (spec.kind == "logistic") return FbsL1Op::logistic(data, spec.lambda, gamma, layout);
      // Least squares against a sparse planted model.
      Vec w(n, 0.0);
      std::bernoulli_distribution keep(0.2);
      Rng wr = make_stream_rng(spec.seed, 8);
      for (double& v : w)
        if (keep(wr)) v = normal(wr);
      Vec y = data.samples.multiply(w);
      for (double& v : y) v += 0.01 * normal(wr);
      return FbsL1Op::least_squares(data.samples, std::move(y), spec.lambda, gamma, layout);
    };
    FbsL1Op op = make(spec.gamma);
    if (spec.gamma_scale > 0.0) op = make(spec.gamma_scale / op.lipschitz());
    pr.x0.assign(n, 0.0);
    if (op.strong_convexity() > 0.0)
      pr.contraction_bound = quasi_contraction_modulus(op.gamma(), op.strong_convexity(), op.lipschitz());
    auto holder = std::make_unique<FbsL1Op>(std::move(op));
    if (want_oracle && n <= kOracleLimit) pr.x_star = serial_oracle(*holder, pr.x0, 1.0);
    pr.op = std::move(holder);
    return pr;
  }

  if (spec.kind == "feasibility") {
    if (spec.nodes == 0 || spec.dim == 0) throw std::invalid_argument("need --nodes and --dim >= 1");
    Vec center(spec.dim);
    for (double& v : center) v = normal(rng);
    std::uniform_real_distribution<double> slack(0.0, 0.5);
    std::vector<ConvexSet> sets;
    for (std::size_t i = 0; i < spec.nodes; ++i) {
      Halfspace h{Vec(spec.dim), 0.0};
      for (double& v : h.a) v = normal(rng);
      h.beta = dot(h.a, center) + slack(rng);
      sets.emplace_back(std::move(h));
    }
    sets.emplace_back(Box{Vec(spec.dim, -10.0), Vec(spec.dim, 10.0)});
    auto op = std::make_unique<PrsFeasibilityOp>(std::move(sets));
    pr.x0.resize(op->dim());
    for (double& v : pr.x0) v = 5.0 * normal(rng);
    if (want_oracle) pr.x_star = serial_oracle(*op, pr.x0);
    pr.op = std::move(op);
    return pr;
  }

  if (spec.kind == "consensus" || spec.kind == "decentral-admm" || spec.kind == "decentral-grad") {
    if (spec.nodes < 2 && spec.kind != "consensus")
      throw std::invalid_argument("graph problems need --nodes >= 2");
    if (spec.dim == 0) throw std::invalid_argument("--dim must be positive");
    const auto locals = random_locals(spec.nodes, spec.dim, rng);
    const double gamma = spec.gamma > 0.0 ? spec.gamma : 1.0;
    if (spec.kind == "consensus") {
      auto op = std::make_unique<ConsensusAdmmOp>(as_terms(locals), gamma);
      pr.x0.assign(op->dim(), 0.0);
      if (want_oracle) pr.x_star = serial_oracle(*op, pr.x0);
      pr.op = std::move(op);
      return pr;
    }
    const GraphSpec g = gen_graph(parse_graph_kind(spec.graph), spec.nodes, spec.seed);
    if (spec.kind == "decentral-admm") {
      DecentralAdmmOp::Mode mode;
      if (spec.admm_mode == "agent") mode = DecentralAdmmOp::Mode::agent;
      else if (spec.admm_mode == "edge") mode = DecentralAdmmOp::Mode::edge;
      else throw std::invalid_argument("--admm-mode must be agent or edge");
      auto op = std::make_unique<DecentralAdmmOp>(g, as_terms(locals), gamma, mode);
      pr.x0.assign(op->dim(), 0.0);
      if (want_oracle) pr.x_star = serial_oracle(*op, pr.x0);
      pr.op = std::move(op);
      return pr;
    }
    auto op = std::make_unique<DecentralGradOp>(metropolis_mixing_matrix(g), locals, gamma);
    pr.x0.assign(op->dim(), 0.0);
    if (want_oracle) pr.x_star = serial_oracle(*op, pr.x0);
    pr.op = std::move(op);
    return pr;
  }

  if (spec.kind == "expansive") {
    pr.op = std::make_unique<ScaledIdentityOp>(spec.n, 1.5);
    pr.x0.assign(spec.n, 0.0);
    pr.x_star = Vec(spec.n, 0.0);
    return pr;
  }

  throw std::invalid_argument("unknown problem kind '" + spec.kind + "'");
}

void to_json(nlohmann::json& j, const ProblemSpec& s) {
  j = nlohmann::json{{"kind", s.kind},
                     {"n", s.n},
                     {"bandwidth", s.bandwidth},
                     {"dominance", s.dominance},
                     {"data", s.data},
                     {"samples", s.samples},
                     {"features", s.features},
                     {"density", s.density},
                     {"lambda", s.lambda},
                     {"gamma", s.gamma},
                     {"gamma_scale", s.gamma_scale},
                     {"block_target", s.block_target},
                     {"graph", s.graph},
                     {"nodes", s.nodes},
                     {"dim", s.dim},
                     {"admm_mode", s.admm_mode},
                     {"imbalance", s.imbalance},
                     {"seed", s.seed}};
}

}  // namespace arock::cli
