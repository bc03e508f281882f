#pragma once

#include <cstddef>
#include <string>

namespace arock {

/// Validation floor for any step size. Schedules never go below it.
inline constexpr double kEtaMin = 1e-8;

/// Largest step keeping the iterates stochastically Fejer monotone in the
/// xi metric, scaled by c in (0, 1): c * m * p_min / (2 tau sqrt(p_min) + 1).
double fejer_safe_step(std::size_t m, double p_min, std::size_t tau, double c = 0.99);

struct LinearRateSteps {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double a = 0.0;  ///< quadratic coefficient of the eta2 equation
  double b = 0.0;  ///< linear coefficient of the eta2 equation
  double eta() const { return eta1 < eta2 ? eta1 : eta2; }
  /// Per-step contraction base 1 - beta * mu * eta / m at eta = min(eta1, eta2).
  double rate_base = 0.0;
};

/// Step bounds for the linear-rate regime of a quasi-mu-strongly monotone S.
/// With tau = 0 the quadratic for eta2 degenerates (a = 0) and eta2 is its
/// limit (1 - beta) / b.
LinearRateSteps linear_rate_steps(double rho, double beta, double mu, std::size_t tau,
                                  std::size_t m, double p_min);

/// (1 + 1 / max(tau, 1))^2.
double default_rho(std::size_t tau);

/// sqrt(1 - 2 gamma mu + mu gamma^2 L): contraction modulus of the forward
/// step I - gamma grad g for mu-strongly convex, L-smooth g.
double quasi_contraction_modulus(double gamma, double mu, double L);

/// mu = 1 - c for a c-Lipschitz T.
double strong_monotonicity_from_lipschitz(double c);

struct StepSizePolicy {
  enum class Kind { constant, fejer_safe, linear_rate };

  Kind kind = Kind::constant;
  double eta = 0.5;   ///< used by `constant`
  double c = 0.99;    ///< used by `fejer_safe`
  double rho = 0.0;   ///< used by `linear_rate`; 0 selects default_rho(tau)
  double beta = 0.5;  ///< used by `linear_rate`
  double mu = 0.0;    ///< used by `linear_rate`

  static StepSizePolicy constant(double eta);
  static StepSizePolicy fejer(double c = 0.99);
  static StepSizePolicy linear_rate(double mu, double beta = 0.5, double rho = 0.0);

  /// Concrete step for a problem with m blocks, minimum probability p_min
  /// and delay bound tau. Throws if the result is below kEtaMin.
  double resolve(std::size_t m, double p_min, std::size_t tau) const;

  std::string describe() const;
};

}  // namespace arock
