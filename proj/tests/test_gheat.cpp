#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gcalc/errors.hpp"
#include "gcalc/gheat.hpp"
#include "support.hpp"

using namespace gcalc;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// Gaussian call price at mean x, variance v (Bachelier formula), as an independent oracle.
double bachelier_call(double x, double k, double v) {
  const double sd = std::sqrt(v);
  const double z = (x - k) / sd;
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return (x - k) * cdf + sd * kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

SolverConfig small(std::size_t n = 801) {
  SolverConfig c;
  c.n_points = n;
  return c;
}

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.cfl_factor = 0.6;
  EXPECT_THROW(c.validate(), CflError);
  c.cfl_factor = 0.0;
  EXPECT_THROW(c.validate(), CflError);
  c = SolverConfig{};
  c.radius_multiplier = 3.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.n_points = 2;
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW(boundary_policy_from_string("periodic"), ConfigError);
}

TEST(SolverConfig, JsonRoundTrip) {
  SolverConfig c;
  c.cfl_factor = 0.4;
  c.boundary = BoundaryPolicy::clamp;
  c.n_points = 1001;
  const auto back = SolverConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_THROW(SolverConfig::from_json({{"cfl_factor", 0.9}}), ConfigError);
}

TEST(GHeat, ConvexPayoffFollowsUpperVolatility) {
  const auto gamma = UncertaintySet::interval(0.5, 1.0);
  const Payoff1D call = [](double x) { return std::max(x, 0.0); };
  for (double x : {-0.5, 0.0, 0.8}) {
    EXPECT_NEAR(evaluate_pt(gamma, Direction{1.0}, call, 1.0, x, small(1601)), bachelier_call(x, 0.0, 1.0), 1e-3);
  }
  // Concave: the lower volatility.
  const Payoff1D neg = [](double x) { return -std::max(x, 0.0); };
  EXPECT_NEAR(evaluate_pt(gamma, Direction{1.0}, neg, 1.0, 0.0, small(1601)), -bachelier_call(0.0, 0.0, 0.25), 1e-3);
}

TEST(GHeat, ConstantsAndAffinePayoffsAreExact) {
  const auto gamma = UncertaintySet::interval(0.5, 1.0);
  EXPECT_EQ(evaluate_pt(gamma, Direction{1.0}, [](double) { return 3.0; }, 2.0, 0.3, small()), 3.0);
  EXPECT_NEAR(evaluate_pt(gamma, Direction{1.0}, [](double x) { return 2.0 * x - 1.0; }, 1.0, 0.4, small()), -0.2,
              1e-12);
}

TEST(GHeat, QuadraticScalesWithTime) {
  const auto gamma = UncertaintySet::interval(0.5, 1.0);
  EXPECT_NEAR(evaluate_pt(gamma, Direction{1.0}, [](double x) { return x * x; }, 2.0, 0.0, small()), 2.0, 2e-3);
  EXPECT_NEAR(evaluate_pt(gamma, Direction{1.0}, [](double x) { return -x * x; }, 2.0, 0.0, small()), -0.5, 2e-3);
}

// Discrete comparison principle: phi <= psi pointwise gives u_phi <= u_psi on every node.
TEST(GHeatProperty, ComparisonPrinciple) {
  gtest_support::Gen gen(11);
  const Grid1D grid(6.0, 241);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.uniform(-1, 1), b = gen.uniform(-1, 1), c = gen.uniform(0, 0.5);
    const Payoff1D phi = [=](double x) { return a * std::sin(x) + b * std::abs(x - 0.3); };
    const Payoff1D psi = [=](double x) { return phi(x) + c + c * std::cos(x) * std::cos(x); };
    auto u = sample(grid, phi);
    auto v = sample(grid, psi);
    advance(u, 1.0, -0.25, 0.5, 400, BoundaryPolicy::linear_extrapolation);
    advance(v, 1.0, -0.25, 0.5, 400, BoundaryPolicy::linear_extrapolation);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(u.values[i], v.values[i] + 1e-13);
  }
}

// Sublinearity of the discrete operator: u[phi + psi] <= u[phi] + u[psi].
TEST(GHeatProperty, SubadditiveAndTranslationInvariant) {
  gtest_support::Gen gen(12);
  const Grid1D grid(6.0, 201);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2), k = gen.uniform(-3, 3);
    const Payoff1D phi = [=](double x) { return a * x * x / (1 + x * x); };
    const Payoff1D psi = [=](double x) { return b * std::tanh(x); };
    auto u = sample(grid, phi), v = sample(grid, psi);
    auto w = sample(grid, [&](double x) { return phi(x) + psi(x); });
    auto z = sample(grid, [&](double x) { return phi(x) + k; });
    for (auto* g : {&u, &v, &w, &z}) advance(*g, 1.0, -0.25, 0.5, 300, BoundaryPolicy::linear_extrapolation);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_LE(w.values[i], u.values[i] + v.values[i] + 1e-12);
      EXPECT_NEAR(z.values[i], u.values[i] + k, 1e-12);
    }
  }
}

TEST(GHeat, StepViolatingCflThrows) {
  const Grid1D grid(4.0, 81);
  auto u = sample(grid, [](double x) { return x * x; });
  EXPECT_THROW(advance(u, 1.0, 0.0, 1.0, 1, BoundaryPolicy::clamp), CflError);
}

TEST(GHeat, NonFinitePayoffRejected) {
  EXPECT_THROW(sample(Grid1D(2.0, 11), [](double x) { return 1.0 / (x - x); }), NonFiniteError);
}

TEST(GHeat, SemigroupComposition) {
  const auto gamma = UncertaintySet::interval(0.5, 1.0);
  const auto [composed, direct] =
      semigroup_compose(gamma, Direction{1.0}, [](double x) { return std::abs(x); }, 0.5, 0.5, small(), 2.0);
  double gap = 0.0;
  for (std::size_t i = 0; i < composed.grid.size(); ++i) {
    if (std::abs(composed.grid.node(i)) <= 2.0) gap = std::max(gap, std::abs(composed.values[i] - direct.values[i]));
  }
  EXPECT_LE(gap, 5e-3);
}

TEST(GHeat, DirectionalReductionInTwoDimensions) {
  // Along a = (1, 1) a box with axes [0.5,1] x [0.2,0.6] has sigma_plus = 1 + 0.36.
  const auto box = UncertaintySet::diagonal_box({{0.5, 1.0}, {0.2, 0.6}});
  const std::vector<double> x{0.0, 0.0};
  const double v = evaluate_pt(box, Direction{1.0, 1.0}, [](double y) { return y * y; }, 1.0, x, small());
  EXPECT_NEAR(v, 1.36, 2e-3);
}

TEST(GHeat, TwoDimensionalDiagonalSolverSeparates) {
  const auto box = UncertaintySet::diagonal_box({{0.5, 1.0}, {0.2, 0.6}});
  SolverConfig c = small(121);
  // x^2 - y^2: convex in x (upper vol), concave in y (lower vol) -> 1 - 0.04
  const auto sol = solve_gheat_diag(box, [](double x, double y) { return x * x - y * y; }, 1.0, c);
  EXPECT_NEAR(sol.u.at(0.0, 0.0), 1.0 - 0.04, 5e-3);
}

TEST(GridFunction, InterpolationAndLipschitz) {
  const Grid1D g(1.0, 3);
  GridFunction u(g, {0.0, 1.0, 4.0});
  EXPECT_DOUBLE_EQ(u.at(0.5), 2.5);
  EXPECT_DOUBLE_EQ(u.at(2.0), 7.0);  // extended end segment
  EXPECT_DOUBLE_EQ(u.lipschitz_constant(), 3.0);
  EXPECT_EQ(to_csv(u).substr(0, 4), "x,u\n");
}
