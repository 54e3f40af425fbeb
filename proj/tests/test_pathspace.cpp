#include <gtest/gtest.h>

#include <cmath>

#include "gcalc/errors.hpp"
#include "gcalc/pathspace.hpp"

using namespace gcalc;

namespace {

const auto kGamma = UncertaintySet::interval(0.5, 1.0);
const Direction kA{1.0};

}  // namespace

TEST(Partition, Construction) {
  EXPECT_THROW(Partition({0.1, 0.5}), DomainError);
  EXPECT_THROW(Partition({0.0, 0.5, 0.5}), DomainError);
  const auto p = Partition::uniform(1.0, 4);
  EXPECT_EQ(p.steps(), 4u);
  EXPECT_DOUBLE_EQ(p.mesh(), 0.25);
  EXPECT_EQ(p.index_of(0.5), 2u);
  EXPECT_THROW(p.index_of(0.3), PartitionError);
  EXPECT_TRUE(Partition::uniform(1.0, 8).refines(p));
  EXPECT_FALSE(p.refines(Partition::uniform(1.0, 8)));
  EXPECT_FALSE(Partition::uniform(1.0, 6).refines(p));
}

TEST(Controls, LadderAndBangBang) {
  const auto p = Partition::uniform(1.0, 10);
  const auto ladder = volatility_ladder(kGamma, p, 3);
  ASSERT_EQ(ladder.size(), 3u);
  EXPECT_DOUBLE_EQ(ladder.front().matrices[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(ladder.back().matrices[0](0, 0), 1.0);
  for (const auto& c : ladder) EXPECT_NO_THROW(c.validate(kGamma));
  const auto bb = bang_bang_control(kGamma, p, kA, [](double t) { return t < 0.5 ? 1.0 : -1.0; });
  EXPECT_DOUBLE_EQ(bb.matrices.front()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(bb.matrices.back()(0, 0), 0.5);
  const auto bad = ScenarioControl::constant(p, VolMatrix::scalar(2.0));
  EXPECT_THROW(bad.validate(kGamma), DomainError);
}

TEST(Paths, DeterministicByIndex) {
  const auto c = ScenarioControl::constant(Partition::uniform(1.0, 64), VolMatrix::scalar(1.0));
  const auto a = generate_path(c, 5, 17);
  const auto b = generate_path(c, 5, 17);
  const auto other = generate_path(c, 5, 18);
  EXPECT_EQ(a.increments(), b.increments());
  EXPECT_NE(a.increments(), other.increments());
  SamplePath reuse = generate_path(c, 5, 0);
  regenerate_path(c, 5, 17, reuse);
  EXPECT_EQ(reuse.increments(), a.increments());
  // positions are running sums
  const auto pos = a.positions(kA);
  double s = 0.0;
  for (std::size_t k = 0; k < a.steps(); ++k) s += a.increment(k)[0];
  EXPECT_NEAR(pos.back(), s, 1e-14);
  EXPECT_EQ(a.to_csv().substr(0, 5), "t,B1\n");
}

TEST(Paths, ScaleFollowsControl) {
  const auto p = Partition::uniform(1.0, 16);
  const auto one = generate_path(ScenarioControl::constant(p, VolMatrix::scalar(1.0)), 3, 4);
  const auto half = generate_path(ScenarioControl::constant(p, VolMatrix::scalar(0.5)), 3, 4);
  for (std::size_t k = 0; k < p.steps(); ++k) EXPECT_NEAR(half.increment(k)[0], 0.5 * one.increment(k)[0], 1e-15);
}

TEST(Integrals, MatchHandSums) {
  const auto p = Partition({0.0, 0.2, 0.5, 1.0});
  const auto path = SamplePath(p, 1, {0.3, -0.1, 0.4}, 0, 0);
  const auto eta = SimpleProcess::position(p, kA);
  // xi = B at left ends: 0, 0.3, 0.2
  EXPECT_NEAR(ito_integral(eta, path, kA), 0.0 * 0.3 + 0.3 * -0.1 + 0.2 * 0.4, 1e-15);
  EXPECT_NEAR(bochner_integral(eta, path), 0.0 * 0.2 + 0.3 * 0.3 + 0.2 * 0.5, 1e-15);
  EXPECT_NEAR(integral_wrt_qv(eta, path, kA), 0.3 * 0.01 + 0.2 * 0.16, 1e-15);
  const auto qv = quadratic_variation(path, kA);
  EXPECT_NEAR(qv.back(), 0.09 + 0.01 + 0.16, 1e-15);
  // d = 1: <B, B> = <B>
  EXPECT_NEAR(mutual_variation(path, kA, kA).back(), qv.back(), 1e-15);
}

TEST(Integrals, PartitionMismatchRejected) {
  const auto path = generate_path(ScenarioControl::constant(Partition::uniform(1.0, 6), VolMatrix::scalar(1.0)), 1, 0);
  EXPECT_THROW(step_values(SimpleProcess::constant(Partition::uniform(1.0, 4), 1.0), path), PartitionError);
  EXPECT_THROW(step_values(SimpleProcess::constant(Partition::uniform(2.0, 3), 1.0), path), PartitionError);
  EXPECT_NO_THROW(step_values(SimpleProcess::constant(Partition::uniform(1.0, 3), 1.0), path));
}

TEST(Prefix, HidesTheFuture) {
  const auto path = SamplePath(Partition::uniform(1.0, 3), 1, {0.1, 0.2, 0.3}, 0, 0);
  const PathPrefix pre(path, 2);
  EXPECT_NEAR(pre.position(kA), 0.3, 1e-15);
  EXPECT_NO_THROW(pre.increment(1));
  EXPECT_THROW(pre.increment(2), PartitionError);
}

// B_T^2 = 2 int B dB + <B>_T on each path, in two dimensions along mixed directions.
TEST(Integrals, PathwiseQuadraticIdentity) {
  const auto p = Partition::uniform(1.0, 500);
  const auto c = ScenarioControl::constant(p, VolMatrix::from_rows({{1.0, 0.2}, {0.0, 0.6}}));
  const Direction a{0.3, -1.1};
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto path = generate_path(c, 9, i);
    const double b = a.dot(path.position(p.steps()));
    const double lhs = b * b;
    const double rhs = 2.0 * ito_integral(SimpleProcess::position(p, a), path, a) + quadratic_variation(path, a).back();
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(ScenarioSup, MaxOverControlsAndBudget) {
  const auto p = Partition::uniform(1.0, 10);
  const auto ladder = volatility_ladder(kGamma, p, 5);
  const PathFunctional sq = [](const SamplePath& s) { return std::pow(s.position(s.steps())[0], 2); };
  const auto r = scenario_sup_expect(sq, kGamma, ladder, 4000, 1);
  EXPECT_EQ(r.argmax_label, ladder.back().label);
  EXPECT_NEAR(r.value, 1.0, 4.0 * r.standard_error);
  EXPECT_THROW(scenario_sup_expect(sq, kGamma, ladder, 4000, 1, MonteCarloBudget{1000.0}), BudgetError);
  EXPECT_THROW(scenario_sup_expect(sq, kGamma, {}, 10, 1), DomainError);
}

TEST(Ensemble, SupMeanAndStats) {
  Ensemble e{{"a", {1.0, 3.0}}, {"b", {4.0, 4.0}}};
  const auto s = sup_mean(e);
  EXPECT_EQ(s.argmax, 1u);
  EXPECT_DOUBLE_EQ(s.value, 4.0);
  EXPECT_DOUBLE_EQ(s.per_scenario[0].mean, 2.0);
  EXPECT_DOUBLE_EQ(s.per_scenario[0].standard_error, 1.0);
  EXPECT_THROW(sup_mean(Ensemble{}), DomainError);
}
