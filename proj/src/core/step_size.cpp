#include "arock/core/step_size.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arock {

double fejer_safe_step(std::size_t m, double p_min, std::size_t tau, double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("fejer_safe_step: c must lie in (0, 1)");
  if (m == 0) throw std::invalid_argument("fejer_safe_step: m must be positive");
  const double md = static_cast<double>(m);
  if (!(p_min > 0.0) || p_min > 1.0 / md * (1.0 + 1e-12))
    throw std::invalid_argument("fejer_safe_step: p_min must lie in (0, 1/m]");
  const double sp = std::sqrt(p_min);
  return c * md * p_min / (2.0 * static_cast<double>(tau) * sp + 1.0);
}

double default_rho(std::size_t tau) {
  const double t = static_cast<double>(std::max<std::size_t>(tau, 1));
  const double r = 1.0 + 1.0 / t;
  return r * r;
}

LinearRateSteps linear_rate_steps(double rho, double beta, double mu, std::size_t tau,
                                  std::size_t m, double p_min) {
  if (!(rho > 1.0)) throw std::invalid_argument("linear_rate_steps: rho must exceed 1");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("linear_rate_steps: beta must lie in (0, 1)");
  if (!(mu > 0.0)) throw std::invalid_argument("linear_rate_steps: mu must be positive");
  if (m == 0 || !(p_min > 0.0)) throw std::invalid_argument("linear_rate_steps: need m >= 1, p_min > 0");

  const double md = static_cast<double>(m);
  const double td = static_cast<double>(tau);
  const double sp = std::sqrt(p_min);
  LinearRateSteps out;
  out.eta1 = (1.0 - 1.0 / rho) * (md * sp / 8.0) * (std::sqrt(rho) - 1.0) /
             (std::pow(rho, (td + 1.0) / 2.0) - 1.0);

  // rho (rho^tau - 1) / (rho - 1) = rho + rho^2 + ... + rho^tau
  const double geo = rho * (std::pow(rho, td) - 1.0) / (rho - 1.0);
  out.a = 2.0 * beta * mu * td / (md * md * p_min) * geo;
  out.b = 1.0 / (md * p_min) + (2.0 / md) * std::sqrt(geo * td / p_min);
  if (tau == 0) {
    out.eta2 = (1.0 - beta) / out.b;
  } else {
    // Rationalized root avoids cancellation when 4(1 - beta) a << b^2.
    const double disc = out.b * out.b + 4.0 * (1.0 - beta) * out.a;
    out.eta2 = 2.0 * (1.0 - beta) / (out.b + std::sqrt(disc));
  }
  out.rate_base = 1.0 - beta * mu * out.eta() / md;
  return out;
}

double quasi_contraction_modulus(double gamma, double mu, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("quasi_contraction_modulus: L must be positive");
  if (!(gamma > 0.0 && gamma < 2.0 / L))
    throw std::invalid_argument("quasi_contraction_modulus: gamma must lie in (0, 2/L)");
  if (!(mu > 0.0 && mu <= L))
    throw std::invalid_argument("quasi_contraction_modulus: need 0 < mu <= L");
  const double v = 1.0 - 2.0 * gamma * mu + mu * gamma * gamma * L;
  return std::sqrt(std::max(v, 0.0));
}

double strong_monotonicity_from_lipschitz(double c) {
  if (!(c >= 0.0 && c < 1.0))
    throw std::invalid_argument("strong_monotonicity_from_lipschitz: c must lie in [0, 1)");
  return 1.0 - c;
}

StepSizePolicy StepSizePolicy::constant(double eta) {
  StepSizePolicy p;
  p.kind = Kind::constant;
  p.eta = eta;
  return p;
}

StepSizePolicy StepSizePolicy::fejer(double c) {
  StepSizePolicy p;
  p.kind = Kind::fejer_safe;
  p.c = c;
  return p;
}

StepSizePolicy StepSizePolicy::linear_rate(double mu, double beta, double rho) {
  StepSizePolicy p;
  p.kind = Kind::linear_rate;
  p.mu = mu;
  p.beta = beta;
  p.rho = rho;
  return p;
}

double StepSizePolicy::resolve(std::size_t m, double p_min, std::size_t tau) const {
  double value = 0.0;
  switch (kind) {
    case Kind::constant:
      value = eta;
      break;
    case Kind::fejer_safe:
      value = fejer_safe_step(m, p_min, tau, c);
      break;
    case Kind::linear_rate: {
      const double r = rho > 0.0 ? rho : default_rho(tau);
      value = linear_rate_steps(r, beta, mu, tau, m, p_min).eta();
      break;
    }
  }
  if (!std::isfinite(value) || value < kEtaMin) {
    std::ostringstream msg;
    msg << "step size " << value << " is below the floor " << kEtaMin;
    throw std::invalid_argument(msg.str());
  }
  return value;
}

std::string StepSizePolicy::describe() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::constant:
      s << "constant(eta=" << eta << ")";
      break;
    case Kind::fejer_safe:
      s << "fejer_safe(c=" << c << ")";
      break;
    case Kind::linear_rate:
      s << "linear_rate(mu=" << mu << ",beta=" << beta << ",rho=" << rho << ")";
      break;
  }
  return s.str();
}

}  // namespace arock
