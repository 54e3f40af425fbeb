#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gcalc/errors.hpp"
#include "gcalc/gnormal.hpp"

using namespace gcalc;

namespace {

// Composite Simpson rule against the normal density, an oracle independent of the library quadrature.
double simpson_gaussian(const std::function<double(double)>& f, double variance) {
  const double sd = std::sqrt(variance), lo = -12.0 * sd, hi = 12.0 * sd;
  const int n = 20000;
  const double h = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * f(x) * std::exp(-0.5 * x * x / variance);
  }
  return s * h / 3.0 / std::sqrt(2.0 * std::numbers::pi * variance);
}

}  // namespace

TEST(GNormal, DoubleFactorial) {
  EXPECT_EQ(double_factorial_odd(0), 1u);
  EXPECT_EQ(double_factorial_odd(2), 1u);
  EXPECT_EQ(double_factorial_odd(4), 3u);
  EXPECT_EQ(double_factorial_odd(6), 15u);
  EXPECT_EQ(double_factorial_odd(20), 654729075u);
  EXPECT_THROW(double_factorial_odd(3), DomainError);
  EXPECT_THROW(double_factorial_odd(22), DomainError);
}

TEST(GNormal, ReferenceMoments) {
  const auto p = GNormalParams::from(UncertaintySet::interval(0.5, 1.0), Direction{1.0}, 1.0);
  EXPECT_DOUBLE_EQ(p.sigma_plus, 1.0);
  EXPECT_DOUBLE_EQ(p.sigma_minus, -0.25);
  EXPECT_NEAR(moment_even_signed(p, 2, 1), 1.0, 1e-15);
  EXPECT_NEAR(moment_even_signed(p, 2, -1), -0.25, 1e-15);
  EXPECT_NEAR(moment_even_signed(p, 4, 1), 3.0, 1e-14);
  EXPECT_NEAR(moment_abs(p, 1), std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_NEAR(moment_abs(p, 3), 2.0 * std::sqrt(2.0) / std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_EQ(moment_abs(p, 0), 1.0);
}

TEST(GNormal, AbsMomentsAgainstSimpson) {
  GNormalParams p{0.7, -0.1, 1.5};
  for (int n = 1; n <= 6; ++n) {
    EXPECT_NEAR(moment_abs(p, n), simpson_gaussian([n](double x) { return std::pow(std::abs(x), n); }, 0.7 * 1.5),
                1e-8)
        << n;
  }
}

TEST(GNormal, QuadratureAgainstSimpson) {
  auto f = [](double x) { return std::log1p(std::exp(x)); };
  EXPECT_NEAR(gaussian_expectation(f, 0.0, 0.8), simpson_gaussian(f, 0.8), 1e-9);
  GNormalParams p{1.0, -0.25, 1.0};
  auto call = [](double x) { return std::max(x, 0.0); };
  EXPECT_NEAR(convex_payoff_value(p, call, 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-9);
  EXPECT_NEAR(concave_payoff_value(p, [&](double x) { return -call(x); }, 0.0),
              -std::sqrt(0.25 / (2.0 * std::numbers::pi)), 1e-9);
  GNormalParams flat{1.0, 0.0, 1.0};
  EXPECT_EQ(concave_payoff_value(flat, [](double x) { return -x * x + 2.0; }, 0.5), 1.75);
}

TEST(GNormal, Validation) {
  EXPECT_THROW((GNormalParams{-1.0, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((GNormalParams{1.0, 0.1, 1.0}.validate()), DomainError);
  EXPECT_THROW((GNormalParams{1.0, 0.0, -1.0}.validate()), DomainError);
  GNormalParams p;
  EXPECT_THROW(moment_even_signed(p, 3, 1), DomainError);
  EXPECT_THROW(moment_even_signed(p, 2, 0), DomainError);
}

TEST(GNormal, QuadraticFormValue) {
  const auto box = UncertaintySet::diagonal_box({{0.5, 1.0}, {0.2, 0.6}});
  const auto a = SymMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
  EXPECT_NEAR(quadratic_form_value(box, a, 2.0), 2.0 * (1.0 - 0.04), 1e-14);
}
