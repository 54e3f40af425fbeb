#include <gtest/gtest.h>

#include <cmath>

#include "gcalc/errors.hpp"
#include "gcalc/jensen.hpp"
#include "support.hpp"

using namespace gcalc;

namespace {

const auto kGamma = UncertaintySet::interval(0.5, 1.0);

ExpectationConfig small_cfg() {
  ExpectationConfig c;
  c.solver.n_points = 801;
  c.prefix_points = 101;
  c.inner_points = 201;
  return c;
}

}  // namespace

TEST(Convexity, Verdicts) {
  const auto probes = default_probes(kGamma);
  EXPECT_EQ(probes.size(), 75u);
  EXPECT_TRUE(is_g_convex(scalar_function("linear"), kGamma, probes).g_convex);
  EXPECT_TRUE(is_g_convex(scalar_function("square"), kGamma, probes).g_convex);
  EXPECT_TRUE(is_g_convex(scalar_function("exp"), kGamma, probes).g_convex);
  const auto neg = is_g_convex(scalar_function("neg_square"), kGamma, probes);
  EXPECT_FALSE(neg.g_convex);
  EXPECT_LT(neg.min_value, 0.0);
  EXPECT_THROW(is_g_convex(scalar_function("linear"), kGamma, {}), DomainError);
}

// h(y) = -y reduces the criterion to G(-A) + G(A) >= 0, which is sublinearity itself;
// for a singleton Gamma the two terms cancel exactly.
TEST(Convexity, NegLinearIsSublinearity) {
  const auto r = is_g_convex(scalar_function("neg_linear"), kGamma, default_probes(kGamma));
  EXPECT_TRUE(r.g_convex);
  EXPECT_GE(r.min_value, 0.0);
  const auto classical = UncertaintySet::singleton(VolMatrix::scalar(0.7));
  EXPECT_NEAR(is_g_convex(scalar_function("neg_linear"), classical, default_probes(classical)).min_value, 0.0, 1e-15);
}

TEST(Convexity, PolynomialDerivatives) {
  const auto f = scalar_function("poly", {1.0, -2.0, 0.0, 0.5});
  EXPECT_DOUBLE_EQ(f.h(2.0), 1.0 - 4.0 + 4.0);
  EXPECT_DOUBLE_EQ(f.dh(2.0), -2.0 + 6.0);
  EXPECT_DOUBLE_EQ(f.d2h(2.0), 6.0);
  EXPECT_THROW(scalar_function("poly"), ConfigError);
  EXPECT_THROW(scalar_function("cosh"), ConfigError);
}

// Generator inequality G(h' A + h'' z z^T) >= h' G(A) rechecked by hand on random probes.
TEST(ConvexityProperty, SquareOnRandomProbes) {
  gtest_support::Gen gen(31);
  std::vector<ConvexityProbe> probes;
  for (int i = 0; i < 300; ++i) {
    probes.push_back({gen.uniform(-5, 5), {gen.uniform(-2, 2)}, SymMatrix::scalar(gen.uniform(-3, 3))});
  }
  EXPECT_TRUE(is_g_convex(scalar_function("square"), kGamma, probes).g_convex);
  EXPECT_TRUE(is_g_convex(scalar_function("exp"), kGamma, probes).g_convex);
}

TEST(Jensen, ClosedFormDeltas) {
  const auto cfg = small_cfg();
  const auto sq = jensen_check(scalar_function("square"), [](double x) { return x; }, kGamma, Direction{1.0}, 1.0, cfg);
  EXPECT_NEAR(sq.delta, 1.0, 2e-3);  // E[B^2] - (E[B])^2
  EXPECT_GE(sq.conditional_min, -5e-3);
  const auto neg =
      jensen_check(scalar_function("neg_square"), [](double x) { return x; }, kGamma, Direction{1.0}, 1.0, cfg);
  EXPECT_NEAR(neg.delta, -0.25, 2e-3);  // E[-B^2] - 0
  EXPECT_LT(neg.conditional_min, -5e-3);
  const auto nl =
      jensen_check(scalar_function("neg_linear"), [](double x) { return x * x; }, kGamma, Direction{1.0}, 1.0, cfg);
  EXPECT_NEAR(nl.delta, -0.25 + 1.0, 2e-3);
}

TEST(Martingale, CompensatorAndNegation) {
  const auto cfg = small_cfg();
  const auto up = compensated_martingale_check(SymMatrix::scalar(1.0), {0.5}, kGamma, 0.5, 1.5, cfg);
  EXPECT_LE(up.max_violation, 5e-3);
  EXPECT_DOUBLE_EQ(up.compensator_rate, 1.0);
  EXPECT_NEAR(up.negated_gap_min, 0.75, 5e-3);
  const auto down = compensated_martingale_check(SymMatrix::scalar(-1.0), {0.5}, kGamma, 0.5, 1.5, cfg);
  EXPECT_LE(down.max_violation, 5e-3);
  EXPECT_DOUBLE_EQ(down.compensator_rate, -0.25);
  EXPECT_THROW(compensated_martingale_check(SymMatrix::scalar(1.0), {0.5}, kGamma, 0.0, 1.0, cfg), DomainError);
}

TEST(Submartingale, SquareOfBrownianTerminal) {
  CylinderFunctional x;
  x.times = {1.0};
  x.phi = [](std::span<const double> v) { return v[0]; };
  const auto r = submartingale_check(scalar_function("square"), x, kGamma, 0.5, 0.8, small_cfg());
  // h(B_t) vs h(B_s): E[(y + B_0.3)^2] - y^2 = 0.3
  EXPECT_NEAR(r.min_margin, 0.3, 5e-3);
}
