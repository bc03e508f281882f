#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "arock/core/checks.hpp"
#include "arock/core/fejer.hpp"
#include "arock/core/sampling.hpp"
#include "arock/core/step_size.hpp"
#include "arock/core/update.hpp"
#include "arock/io/generators.hpp"
#include "arock/ops/jacobi.hpp"
#include "arock/ops/simple.hpp"
#include "support.hpp"

using namespace arock;
using doctest::Approx;

namespace {

JacobiOp two_by_two() {
  // [[2, 1], [1, 2]] x = (3, 3)
  auto A = SparseMatrixCSR::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
  return JacobiOp(A, {3.0, 3.0});
}

Vec random_vec(std::size_t n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (double& x : v) x = scale * g(rng);
  return v;
}

}  // namespace

TEST_CASE("km_step examples") {
  const ScaledIdentityOp identity(3, 1.0);
  const Vec x{1.5, -2.0, 7.0};
  CHECK(km_step(x, 0.5, identity) == x);

  const ScaledIdentityOp half(2, 0.5);
  const Vec y = km_step(Vec{1.0, 1.0}, 1.0, half);
  CHECK(y[0] == Approx(0.5));
  CHECK(y[1] == Approx(0.5));

  const Vec z = km_step(Vec{0.0, 0.0}, 0.5, two_by_two());
  CHECK(z[0] == Approx(0.75));
  CHECK(z[1] == Approx(0.75));
}

TEST_CASE("km_step rejects bad input") {
  const ScaledIdentityOp half(2, 0.5);
  CHECK_THROWS(km_step(Vec{NAN, 1.0}, 0.5, half));
  CHECK_THROWS(km_step(Vec{1.0, 1.0}, 0.0, half));
  CHECK_THROWS(km_step(Vec{1.0, 1.0}, 1.5, half));
}

TEST_CASE("km residual is non-increasing for a nonexpansive map") {
  LinearSystem sys = gen_diag_dominant(40, 4, 5, 0.9);
  const JacobiOp op(sys.A, sys.b);
  Rng rng = make_stream_rng(3, 0);
  for (double alpha : {0.3, 0.7, 1.0}) {
    Vec x = random_vec(40, rng, 5.0);
    double prev = op.fixed_point_residual(x);
    for (int k = 0; k < 50; ++k) {
      x = km_step(x, alpha, op);
      const double r = op.fixed_point_residual(x);
      CHECK(r <= prev * (1.0 + 1e-12));
      prev = r;
    }
  }
}

TEST_CASE("arock_update normalization") {
  const JacobiOp op = two_by_two();
  const Vec x{0.2, -0.4}, xhat{0.1, 0.3};
  const Vec s = op.apply_S(xhat);

  SUBCASE("uniform p gives x_i - eta (S xhat)_i, other blocks untouched") {
    const Vec out = arock_update(x, xhat, 1, 0.4, SamplingDistribution::uniform(2), op);
    CHECK(out[0] == x[0]);
    CHECK(out[1] == Approx(x[1] - 0.4 * s[1]));
  }
  SUBCASE("p = (0.5, 0.5) matches uniform") {
    const Vec a = arock_update(x, xhat, 0, 0.4, SamplingDistribution({0.5, 0.5}), op);
    const Vec b = arock_update(x, xhat, 0, 0.4, SamplingDistribution::uniform(2), op);
    CHECK(a == b);
  }
  SUBCASE("p = (0.25, 0.75) doubles the step on block 0") {
    const Vec out = arock_update(x, xhat, 0, 0.3, SamplingDistribution({0.25, 0.75}), op);
    CHECK(out[0] == Approx(x[0] - 0.6 * s[0]));
    CHECK(out[1] == x[1]);
  }
  SUBCASE("block out of range") {
    CHECK_THROWS(arock_update(x, xhat, 2, 0.3, SamplingDistribution::uniform(2), op));
  }
}

TEST_CASE("one tau = 0 epoch over a permutation is a Gauss-Seidel KM pass") {
  LinearSystem sys = gen_diag_dominant(30, 3, 8);
  const JacobiOp op(sys.A, sys.b);
  Rng rng = make_stream_rng(4, 0);
  Vec x = random_vec(30, rng);
  std::vector<std::size_t> order(30);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const double eta = 0.7;
  Vec via_update = x, via_km = x;
  for (std::size_t i : order) {
    via_update = arock_update(via_update, via_update, i, eta, SamplingDistribution::uniform(30), op);
    via_km[i] -= eta * op.apply_S(via_km)[i];
  }
  CHECK(via_update == via_km);
}

TEST_CASE("sampling distribution") {
  CHECK_THROWS(SamplingDistribution({0.5, 0.6}));
  CHECK_THROWS(SamplingDistribution({1.0, 0.0}));
  const SamplingDistribution p({0.1, 0.2, 0.3, 0.4});
  CHECK(std::accumulate(p.probs().begin(), p.probs().end(), 0.0) == Approx(1.0).epsilon(1e-12));
  CHECK(p.p_min() == Approx(0.1));

  Rng rng = make_stream_rng(1, 0);
  std::vector<double> hits(4, 0.0);
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) hits[p.sample(rng)] += 1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double sd = std::sqrt(draws * p.p(i) * (1 - p.p(i)));
    CHECK(std::abs(hits[i] - draws * p.p(i)) < 4.0 * sd);
  }
  const SamplingDistribution r = SamplingDistribution::from_rates({1.0, 3.0});
  CHECK(r.p(0) == Approx(0.25));
}

TEST_CASE("fejer_safe_step") {
  CHECK(fejer_safe_step(50, 1.0 / 50, 0, 0.999999) == Approx(1.0).epsilon(1e-5));
  const std::size_t m = 400;
  CHECK(fejer_safe_step(m, 1.0 / m, 20, 0.9) == Approx(0.3));  // tau = sqrt(m)
  CHECK(fejer_safe_step(100, 0.01, 5, 0.9) == Approx(0.45));
  CHECK_THROWS(fejer_safe_step(100, 0.01, 5, 1.0));
  CHECK_THROWS(fejer_safe_step(100, 0.01, 5, 0.0));

  for (std::size_t tau = 0; tau < 30; ++tau)
    CHECK(fejer_safe_step(100, 0.01, tau + 1) < fejer_safe_step(100, 0.01, tau));
  CHECK(fejer_safe_step(100, 0.005, 4) < fejer_safe_step(100, 0.01, 4));
  CHECK(fejer_safe_step(200, 0.005, 4) > fejer_safe_step(100, 0.005, 4));
}

TEST_CASE("step size policies") {
  CHECK(StepSizePolicy::constant(0.3).resolve(10, 0.1, 3) == 0.3);
  CHECK(StepSizePolicy::fejer(0.9).resolve(100, 0.01, 5) == Approx(0.45));
  CHECK_THROWS(StepSizePolicy::constant(1e-9).resolve(10, 0.1, 0));
  const double eta = StepSizePolicy::linear_rate(0.2, 0.5).resolve(100, 0.01, 4);
  CHECK(eta == Approx(linear_rate_steps(default_rho(4), 0.5, 0.2, 4, 100, 0.01).eta()));
  CHECK(default_rho(4) == Approx(1.5625));
  CHECK(default_rho(0) == Approx(4.0));
}

namespace {
using Big = boost::multiprecision::cpp_dec_float_50;
}

TEST_CASE("linear_rate_steps against a 50-digit evaluation") {
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  const int m = 100, tau = 4;
  const Big rho = Big(1.5625), beta = Big(0.5), mu = Big(0.1), p = Big(1) / 100;
  const Big eta1 = (1 - 1 / rho) * (m * sqrt(p) / 8) * (sqrt(rho) - 1) / (pow(rho, Big(tau + 1) / 2) - 1);
  const Big geo = rho * (pow(rho, Big(tau)) - 1) / (rho - 1);
  const Big a = 2 * beta * mu * tau / (Big(m) * m * p) * geo;
  const Big b = 1 / (m * p) + Big(2) / m * sqrt(geo * tau / p);
  const Big eta2 = (-b + sqrt(b * b + 4 * (1 - beta) * a)) / (2 * a);

  const LinearRateSteps s = linear_rate_steps(1.5625, 0.5, 0.1, tau, m, 0.01);
  CHECK(s.eta1 == Approx(eta1.convert_to<double>()).epsilon(1e-13));
  CHECK(s.eta2 == Approx(eta2.convert_to<double>()).epsilon(1e-13));
  CHECK(s.a == Approx(a.convert_to<double>()).epsilon(1e-13));
  CHECK(s.b == Approx(b.convert_to<double>()).epsilon(1e-13));
  CHECK(s.rate_base == Approx(1.0 - 0.5 * 0.1 * std::min(s.eta1, s.eta2) / m).epsilon(1e-15));
}

TEST_CASE("linear_rate_steps properties") {
  for (std::size_t tau : {1, 2, 5, 16}) {
    for (double beta : {0.1, 0.5, 0.9}) {
      const auto s = linear_rate_steps(default_rho(tau), beta, 0.3, tau, 64, 1.0 / 64);
      CHECK(std::abs(s.a * s.eta2 * s.eta2 + s.b * s.eta2 - (1.0 - beta)) < 1e-10);
      CHECK(s.rate_base < 1.0);
      CHECK(s.rate_base > 0.0);
    }
  }
  const auto near_one = linear_rate_steps(2.0, 1.0 - 1e-9, 0.5, 3, 50, 0.02);
  CHECK(near_one.eta2 < 1e-8);
  const auto sync = linear_rate_steps(4.0, 0.5, 0.5, 0, 50, 0.02);
  CHECK(sync.a == 0.0);
  CHECK(sync.eta2 == Approx(0.5 / sync.b));
  CHECK_THROWS(linear_rate_steps(1.0, 0.5, 0.5, 3, 50, 0.02));
  CHECK_THROWS(linear_rate_steps(2.0, 0.5, 0.0, 3, 50, 0.02));
}

TEST_CASE("xi metric") {
  SUBCASE("hand example") {
    const std::vector<Vec> window{{0.0}, {1.0}, {1.0}};
    CHECK(xi_metric(window, Vec{0.0}, 0.25, 2) == Approx(1.5));
  }
  SUBCASE("tau = 0 is the squared distance") {
    const std::vector<Vec> window{{3.0, 4.0}};
    CHECK(xi_metric(window, Vec{0.0, 0.0}, 0.5, 0) == Approx(25.0));
  }
  SUBCASE("constant history at x* is zero") {
    const std::vector<Vec> window(5, Vec{1.0, 2.0});
    CHECK(xi_metric(window, Vec{1.0, 2.0}, 0.1, 4) == 0.0);
  }
  SUBCASE("short history is rejected") {
    const std::vector<Vec> window(2, Vec{1.0});
    CHECK_THROWS(xi_metric(window, Vec{0.0}, 0.1, 4));
  }
  SUBCASE("dominates the squared distance") {
    Rng rng = make_stream_rng(9, 0);
    for (int t = 0; t < 200; ++t) {
      std::vector<Vec> window;
      for (int i = 0; i < 4; ++i) window.push_back(random_vec(3, rng));
      const Vec xs = random_vec(3, rng);
      CHECK(xi_metric(window, xs, 0.2, 3) >= dist_sq(window.back(), xs));
    }
  }
}

TEST_CASE("Fejer weight matrix is positive definite") {
  for (std::size_t tau = 0; tau <= 64; tau += (tau < 8 ? 1 : 8)) {
    for (double p : {1.0, 0.1, 0.001}) {
      const FejerMetricSpec spec(tau, p);
      CHECK(spec.is_positive_definite());
      CHECK(spec.min_eigenvalue() > 0.0);
    }
  }
  const FejerMetricSpec spec(3, 0.25);
  const auto d = spec.diagonal();
  const auto o = spec.off_diagonal();
  REQUIRE(d.size() == 4);
  REQUIRE(o.size() == 3);
  CHECK(d[0] == Approx(0.5 * (2.0 + 3.0)));
  CHECK(d[1] == Approx(0.5 * 5.0));
  CHECK(d[3] == Approx(0.5));
  CHECK(o[0] == Approx(-0.5 * 3.0));
  CHECK(o[2] == Approx(-0.5));
}

TEST_CASE("cocoercivity check") {
  Rng rng = make_stream_rng(2, kCheckStream);
  const ScaledIdentityOp identity(4, 1.0);
  const auto id = check_cocoercivity(identity, 500, rng);
  CHECK(id.passed());
  CHECK(id.worst_margin == 0.0);

  const HalfspaceProjectionOp proj(Vec{1.0, 2.0, -1.0}, 0.5);
  const auto pr = check_cocoercivity(proj, 2000, rng, 3.0);
  CHECK(pr.passed());
  CHECK(pr.worst_margin >= -1e-10);

  const ScaledIdentityOp expansive(4, 1.5);
  const auto ex = check_cocoercivity(expansive, 200, rng);
  CHECK_FALSE(ex.passed());
  CHECK(ex.worst_margin < 0.0);
}

TEST_CASE("quasi-contraction modulus") {
  CHECK(quasi_contraction_modulus(1.0, 1.0, 1.0) == Approx(0.0).epsilon(1e-12));
  CHECK(quasi_contraction_modulus(0.5, 0.2, 1.0) == Approx(std::sqrt(0.85)));
  CHECK(quasi_contraction_modulus(0.5, 1e-12, 1.0) == Approx(1.0));
  CHECK_THROWS(quasi_contraction_modulus(2.0, 0.2, 1.0));
  CHECK_THROWS(quasi_contraction_modulus(-0.1, 0.2, 1.0));
}

TEST_CASE("strong monotonicity from a Lipschitz constant") {
  CHECK(strong_monotonicity_from_lipschitz(0.0) == 1.0);
  CHECK(strong_monotonicity_from_lipschitz(0.5) == 0.5);
  CHECK_THROWS(strong_monotonicity_from_lipschitz(1.0));

  LinearSystem sys = gen_diag_dominant(60, 4, 12, 0.8);
  const JacobiOp op(sys.A, sys.b);
  const double norm = oracle::jacobi_norm(sys.A);
  CHECK(op.iteration_norm() == Approx(norm).epsilon(1e-6));
  const double mu = strong_monotonicity_from_lipschitz(op.iteration_norm());
  const auto steps = linear_rate_steps(default_rho(2), 0.5, mu, 2, 60, 1.0 / 60);
  CHECK(steps.eta() > 0.0);
}

TEST_CASE("serial solve reaches the direct solution") {
  LinearSystem sys = gen_diag_dominant(50, 5, 1);
  const JacobiOp op(sys.A, sys.b);
  const SerialSolve s = solve_fixed_point(op, Vec(50, 0.0), 1.0, 1e-12, 10000);
  CHECK(s.converged);
  const Vec ref = oracle::solve(sys.A, sys.b);
  CHECK(std::sqrt(dist_sq(s.x, ref)) < 1e-10);
}
