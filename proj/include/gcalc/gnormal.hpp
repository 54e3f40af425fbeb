#pragma once

// Closed-form evaluations of the G-normal distribution along a direction a.
// These are the analytic counterpart of the PDE solver and are used to
// cross-validate it.

#include <cstdint>
#include <functional>

#include "gcalc/sublinear.hpp"

namespace gcalc {

/// (sigma_{aa^T}, sigma_{-aa^T}, t) for a one-dimensional G_a-normal law.
struct GNormalParams {
  double sigma_plus = 1.0;   ///< >= 0
  double sigma_minus = 0.0;  ///< <= 0
  double t = 1.0;            ///< >= 0

  /// Throws DomainError if the sign or time constraints fail.
  void validate() const;

  static GNormalParams from(const UncertaintySet& gamma, const Direction& a, double t);
};

/// E[|B_t^a|^n] = integral |x|^n N(0, sigma_plus t)(dx). n = 0 gives 1.
double moment_abs(const GNormalParams& params, int n);

/// sign = +1: E[(B_t^a)^n] = (n-1)!! (sigma_plus t)^{n/2};
/// sign = -1: E[-(B_t^a)^n] = -(n-1)!! (|sigma_minus| t)^{n/2}. n must be even, <= 20.
double moment_even_signed(const GNormalParams& params, int n, int sign);

/// (n-1)!! in exact integer arithmetic for even n in [0, 20].
std::uint64_t double_factorial_odd(int n);

/// Gaussian expectation of payoff at mean x and variance `variance`, by adaptive
/// Gauss-Kronrod quadrature on [x - 10 sd, x + 10 sd] to absolute tolerance 1e-10.
/// Throws QuadratureError carrying the estimate if the error bound is not met.
double gaussian_expectation(const std::function<double(double)>& payoff, double x, double variance);

/// Value for convex payoffs: Gaussian expectation with variance sigma_plus * t.
double convex_payoff_value(const GNormalParams& params, const std::function<double(double)>& payoff,
                           double x);

/// Value for concave payoffs: variance |sigma_minus| * t; sigma_minus = 0 gives payoff(x).
double concave_payoff_value(const GNormalParams& params, const std::function<double(double)>& payoff,
                            double x);

/// E[(A B_t, B_t)] = 2 G(A) t.
double quadratic_form_value(const UncertaintySet& gamma, const SymMatrix& a_mat, double t);

}  // namespace gcalc
