#include "gcalc/gnormal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "gcalc/errors.hpp"

namespace gcalc {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
// Error estimates above this are treated as non-convergence.
constexpr double kQuadratureFailure = 1e-7;
constexpr unsigned kMaxDepth = 20;

}  // namespace

void GNormalParams::validate() const {
  if (!(sigma_plus >= 0.0) || !(sigma_minus <= 0.0)) {
    throw DomainError("G-normal parameters require sigma_plus >= 0 >= sigma_minus");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("G-normal time must be finite and >= 0");
}

GNormalParams GNormalParams::from(const UncertaintySet& gamma, const Direction& a, double t) {
  const auto v = directional_variance(gamma, a);
  GNormalParams p{v.plus, v.minus, t};
  p.validate();
  return p;
}

double moment_abs(const GNormalParams& params, int n) {
  params.validate();
  if (n < 0) throw DomainError("moment order must be non-negative");
  if (n == 0) return 1.0;
  const double v = params.sigma_plus * params.t;
  // E|N(0, v)|^n = v^{n/2} 2^{n/2} Gamma((n+1)/2) / sqrt(pi)
  const double half = 0.5 * n;
  return std::pow(2.0 * v, half) * std::tgamma(half + 0.5) / std::sqrt(std::numbers::pi);
}

std::uint64_t double_factorial_odd(int n) {
  if (n < 0 || n % 2 != 0) throw DomainError("double factorial helper expects an even order");
  if (n > 20) throw DomainError("moment order above 20 is refused (overflow guard)");
  std::uint64_t r = 1;
  for (int k = n - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

double moment_even_signed(const GNormalParams& params, int n, int sign) {
  params.validate();
  if (n <= 0 || n % 2 != 0) throw DomainError("signed moments require an even positive order");
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  const auto coef = static_cast<double>(double_factorial_odd(n));
  if (sign == 1) return coef * std::pow(params.sigma_plus * params.t, 0.5 * n);
  return -coef * std::pow(-params.sigma_minus * params.t, 0.5 * n);
}

double gaussian_expectation(const std::function<double(double)>& payoff, double x, double variance) {
  if (!(variance >= 0.0)) throw DomainError("variance must be >= 0");
  if (variance == 0.0) return payoff(x);
  const double sd = std::sqrt(variance);
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  auto integrand = [&](double z) {
    // integrate in the standardized variable so the tolerance is scale free
    return payoff(x + sd * z) * std::exp(-0.5 * z * z);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err_left = 0.0, err_right = 0.0;
  // split at the mean: payoff kinks are usually placed there
  const double left = Quad::integrate(integrand, -10.0, 0.0, kMaxDepth, kQuadratureTolerance, &err_left);
  const double right = Quad::integrate(integrand, 0.0, 10.0, kMaxDepth, kQuadratureTolerance, &err_right);
  // normalize by the truncated weight so constants are reproduced to rounding
  const double mass = Quad::integrate([](double z) { return std::exp(-0.5 * z * z); }, -10.0, 10.0,
                                      kMaxDepth, kQuadratureTolerance);
  const double estimate = (left + right) / mass;
  const double err = (err_left + err_right) * sd * norm;
  if (!std::isfinite(estimate) || err > kQuadratureFailure * std::max(1.0, std::abs(estimate))) {
    throw QuadratureError("adaptive quadrature did not converge", estimate, err);
  }
  return estimate;
}

double convex_payoff_value(const GNormalParams& params, const std::function<double(double)>& payoff,
                           double x) {
  params.validate();
  if (!(params.sigma_plus * params.t > 0.0)) throw DomainError("convex branch requires sigma_plus * t > 0");
  return gaussian_expectation(payoff, x, params.sigma_plus * params.t);
}

double concave_payoff_value(const GNormalParams& params, const std::function<double(double)>& payoff,
                            double x) {
  params.validate();
  return gaussian_expectation(payoff, x, -params.sigma_minus * params.t);
}

double quadratic_form_value(const UncertaintySet& gamma, const SymMatrix& a_mat, double t) {
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  return 2.0 * g_value(gamma, a_mat) * t;
}

}  // namespace gcalc
