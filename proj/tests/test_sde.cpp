#include <gtest/gtest.h>

#include <cmath>

#include "gcalc/errors.hpp"
#include "gcalc/sde.hpp"

using namespace gcalc;

namespace {

const auto kGamma = UncertaintySet::interval(0.5, 1.0);

}  // namespace

TEST(Sde, NamedModels) {
  EXPECT_NO_THROW(make_sde("zero"));
  EXPECT_THROW(make_sde("heston"), ConfigError);
  const auto g = make_sde("geometric", {{"lipschitz", 3.0}});
  EXPECT_DOUBLE_EQ(g.lipschitz, 3.0);
  EXPECT_LE(estimate_lipschitz(make_sde("affine", {{"mu", 0.5}, {"nu", 0.8}})), 1.0 + 1e-12);
}

// dX = nu dB with X_0 = x0 is solved exactly by x0 + nu B_t.
TEST(Sde, AdditiveEulerIsExact) {
  const auto spec = make_sde("additive", {{"nu", 0.7}, {"x0", 0.2}});
  const auto c = ScenarioControl::constant(Partition::uniform(1.0, 50), VolMatrix::scalar(1.0));
  const auto path = generate_path(c, 3, 1);
  const auto x = euler_solve(spec, path);
  for (std::size_t k = 0; k <= path.steps(); ++k) EXPECT_NEAR(x.at(k)[0], 0.2 + 0.7 * path.position(k)[0], 1e-13);
  EXPECT_NEAR(stochastic_integral_part(spec, x, path), 0.7 * path.position(path.steps())[0], 1e-13);
}

TEST(Sde, BlowUpNamesTheStep) {
  const auto spec = make_sde("geometric", {{"mu", 200.0}, {"nu", 0.0}});
  const auto c = ScenarioControl::constant(Partition::uniform(1.0, 20), VolMatrix::scalar(1.0));
  try {
    euler_solve(spec, generate_path(c, 1, 0));
    FAIL() << "expected BlowUpError";
  } catch (const BlowUpError& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(Picard, ConstantFormula) {
  auto spec = make_sde("geometric");
  spec.lipschitz = 2.0;
  // 3 K^2 (T + d s + d^2 s^2 T) with d = 1, s = 1, T = 2
  EXPECT_DOUBLE_EQ(picard_constant(spec, kGamma, 2.0), 3.0 * 4.0 * (2.0 + 1.0 + 2.0));
}

TEST(Picard, ContractsAndConverges) {
  const auto spec = make_sde("sine");
  const auto ladder = volatility_ladder(kGamma, Partition::uniform(1.0, 50), 3);
  PicardConfig cfg;
  cfg.n_paths = 100;
  const auto rep = picard_contraction(spec, kGamma, ladder, cfg);
  EXPECT_EQ(rep.ratios.size(), cfg.iterations);
  EXPECT_LE(rep.max_ratio, 0.5);
  EXPECT_TRUE(rep.fixed_point_converged);
  EXPECT_LT(rep.fixed_point_residual, 1e-6);
  EXPECT_TRUE(rep.lipschitz_ok);
}

TEST(Picard, IdenticalGuessesAreDegenerate) {
  const auto ladder = volatility_ladder(kGamma, Partition::uniform(1.0, 10), 2);
  PicardConfig cfg;
  cfg.n_paths = 10;
  auto same = [](double, std::size_t) { return 1.0; };
  const auto rep = picard_contraction(make_sde("geometric"), kGamma, ladder, cfg, same, same);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_EQ(rep.max_ratio, 0.0);
}

TEST(Ito, ResidualVanishesForQuadraticOfB) {
  const auto x = ItoIngredients::constant({0.0}, {0.0}, {0.0}, {1.0}, 1, 1.0);
  const auto c = ScenarioControl::constant(Partition::uniform(1.0, 40), VolMatrix::scalar(0.8));
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_NEAR(ito_residual(ito_function("square"), x, generate_path(c, 2, i)), 0.0, 1e-13);
}

TEST(Ito, LinearFunctionResidualIsRounding) {
  const auto x = ItoIngredients::constant({0.3}, {0.2}, {-0.4}, {0.9}, 1, 1.0);
  const auto c = ScenarioControl::constant(Partition::uniform(1.0, 40), VolMatrix::scalar(0.8));
  EXPECT_NEAR(ito_residual(ito_function("linear"), x, generate_path(c, 2, 3)), 0.0, 1e-13);
}

TEST(Ito, CoarsenAggregatesIncrements) {
  const auto c = ScenarioControl::constant(Partition::uniform(1.0, 8), VolMatrix::scalar(1.0));
  const auto p = generate_path(c, 4, 0);
  const auto q = coarsen(p, 4);
  ASSERT_EQ(q.steps(), 2u);
  EXPECT_NEAR(q.increment(0)[0], p.position(4)[0], 1e-15);
  EXPECT_NEAR(q.position(2)[0], p.position(8)[0], 1e-14);
  EXPECT_THROW(coarsen(p, 3), PartitionError);
}

TEST(Ito, ResidualOrderIsOne) {
  const auto x = ItoIngredients::constant({0.1}, {0.2}, {0.4}, {1.0}, 1, 1.0);
  const auto st = ito_residual_study(ito_function("cube"), x, VolMatrix::scalar(1.0), 16, 5, 800, 3);
  EXPECT_FALSE(st.exact_zero);
  EXPECT_GE(st.order, 1.0 - 3.0 * st.order_se - 0.05);
  // order 1/2 is rejected
  EXPECT_GT(st.order, 0.75);
}
