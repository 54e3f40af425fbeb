#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gcalc/errors.hpp"
#include "gcalc/gexpectation.hpp"
#include "gcalc/templates.hpp"
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

CylinderFunctional cyl(std::vector<double> times, CylinderPayoff f) {
  CylinderFunctional x;
  x.times = std::move(times);
  x.phi = std::move(f);
  return x;
}

}  // namespace

TEST(Expect, SingleTimeMatchesClosedForms) {
  const auto cfg = small_cfg();
  EXPECT_NEAR(expect(cyl({1.0}, [](auto v) { return v[0] * v[0]; }), kGamma, cfg), 1.0, 2e-3);
  EXPECT_NEAR(expect(cyl({1.0}, [](auto v) { return -v[0] * v[0]; }), kGamma, cfg), -0.25, 2e-3);
  EXPECT_NEAR(expect(cyl({2.0}, [](auto v) { return std::abs(v[0]); }), kGamma, cfg),
              std::sqrt(2.0) * std::sqrt(2.0 / std::numbers::pi), 2e-3);
}

TEST(Expect, IncrementIsIndependentAndStationary) {
  const auto cfg = small_cfg();
  // E[phi(B_1.5 - B_0.5)] = E[phi(B_1)]
  const auto inc = expect(cyl({0.5, 1.5}, [](auto v) { return std::max(v[1] - v[0], 0.0); }), kGamma, cfg);
  const auto one = expect(cyl({1.0}, [](auto v) { return std::max(v[0], 0.0); }), kGamma, cfg);
  EXPECT_NEAR(inc, one, 2e-3);
  EXPECT_NEAR(one, 1.0 / std::sqrt(2.0 * std::numbers::pi), 2e-3);
}

// E[B_s^2 - (B_t - B_s)^2]: the two pieces are priced at opposite volatilities, giving
// sigma_plus * s - sigma_minus_abs * (t - s) rather than any single-scenario value.
TEST(Expect, TwoTimeMixedConvexity) {
  const auto v = expect(cyl({0.5, 1.0}, [](auto x) { return x[0] * x[0] - (x[1] - x[0]) * (x[1] - x[0]); }), kGamma,
                        small_cfg());
  EXPECT_NEAR(v, 0.5 * 1.0 - 0.5 * 0.25, 3e-3);
}

TEST(Expect, ThreeTimeSum) {
  ExpectationConfig c = small_cfg();
  c.prefix_points = 41;
  c.inner_points = 101;
  c.solver.n_points = 401;
  // Each squared increment is priced at the upper volatility and they add up.
  const auto v = expect(cyl({0.25, 0.5, 1.0}, [](auto x) { return x[0] * x[0] + (x[2] - x[1]) * (x[2] - x[1]); }),
                        kGamma, c);
  EXPECT_NEAR(v, 0.25 + 0.5, 2e-2);
}

TEST(Conditional, TowerAndMeasurability) {
  const auto cfg = small_cfg();
  const auto x = cyl({0.5, 1.0}, [](auto v) { return std::max(v[1], 0.0) + 0.3 * v[0]; });
  const auto cv = conditional_expect(x, 1, kGamma, cfg);
  EXPECT_EQ(cv.dims(), 1u);
  EXPECT_DOUBLE_EQ(cv.at_time(), 0.5);
  EXPECT_NEAR(expect(cv.as_functional(), kGamma, cfg), expect(x, kGamma, cfg), 1e-9);
  // E[X | H_s] at B_s = y is E[(y + B_{0.5})^+] + 0.3 y for the convex part.
  for (double y : {-0.5, 0.0, 0.7}) {
    const std::vector<double> pre{y};
    const auto v = cyl({0.5}, [y](auto w) { return std::max(y + w[0], 0.0); });
    EXPECT_NEAR(cv(pre), expect(v, kGamma, cfg) + 0.3 * y, 2e-3);
  }
}

TEST(Conditional, RejectsBadIndex) {
  const auto x = cyl({0.5, 1.0}, [](auto v) { return v[1]; });
  EXPECT_THROW(conditional_expect(x, 0, kGamma, small_cfg()), DomainError);
  EXPECT_THROW(conditional_expect(x, 2, kGamma, small_cfg()), DomainError);
}

TEST(Cylinder, Validation) {
  EXPECT_THROW(cyl({1.0, 0.5}, [](auto) { return 0.0; }).validate(), DomainError);
  EXPECT_THROW(cyl({0.0}, [](auto) { return 0.0; }).validate(), DomainError);
  EXPECT_THROW(cyl({0.1, 0.2, 0.3, 0.4}, [](auto) { return 0.0; }).validate(), DimensionError);
  EXPECT_THROW(cyl({1.0}, nullptr).validate(), DomainError);
}

TEST(Axioms, SmallBatteryWithinTolerance) {
  ExpectationConfig c = small_cfg();
  const auto rep = verify_expectation_axioms(kGamma, default_axiom_battery(), c);
  for (const auto& [k, v] : rep.worst) EXPECT_LE(v, 5e-3) << k;
  EXPECT_LE(rep.worst.at("constants"), 1e-12);
  EXPECT_LE(rep.worst.at("homogeneity"), 1e-12);
  EXPECT_LE(rep.worst.at("translation"), 1e-12);
}

TEST(Axioms, BatteryFromJson) {
  const auto doc = nlohmann::json::parse(R"({
    "tolerance": 0.005,
    "cases": [{"name": "calls", "times": [0.5, 1.0],
               "x": {"op": "call", "of": {"op": "coord", "index": 2}, "strike": 0.0},
               "y": {"op": "neg", "of": {"op": "coord", "index": 1}},
               "eta": {"op": "clamp", "of": {"op": "coord", "index": 1}, "lo": -1, "hi": 1}}],
    "stationarity": [{"name": "abs", "psi": {"op": "abs", "of": {"op": "coord", "index": 1}}, "s": 0.5, "t": 1.0}]
  })");
  const auto b = AxiomBattery::from_json(doc);
  ASSERT_EQ(b.cases.size(), 1u);
  ASSERT_EQ(b.stationarity.size(), 1u);
  const auto rep = verify_expectation_axioms(kGamma, b, small_cfg());
  EXPECT_LE(rep.max_violation(), 5e-3);
  EXPECT_THROW(AxiomBattery::from_json({{"cases", {{{"name", "bad"}}}}}), ConfigError);
}

TEST(LpNorm, MatchesDefinition) {
  Ensemble e{{"a", {1.0, -2.0, 3.0}}, {"b", {0.5, 0.5, 0.5}}};
  EXPECT_NEAR(lp_norm(e, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(lp_norm(e, 2.0), std::sqrt(14.0 / 3.0), 1e-15);
  EXPECT_THROW(lp_norm(e, 0.5), DomainError);
  EXPECT_THROW(lp_norm(Ensemble{}, 2.0), DomainError);
}

// C_r, Hoelder and Minkowski hold exactly for sups of empirical means.
TEST(AppendixProperty, RandomEnsembles) {
  gtest_support::Gen gen(21);
  std::vector<NamedPairedEnsemble> battery;
  for (int m = 0; m < 20; ++m) {
    PairedEnsemble pe;
    for (int s = 0; s < 3; ++s) {
      PairedScenarioSamples ps{"s" + std::to_string(s), {}, {}};
      for (int i = 0; i < 50; ++i) {
        ps.x.push_back(gen.normal() * (1 + s));
        ps.y.push_back(std::pow(gen.normal(), 3));
      }
      pe.push_back(std::move(ps));
    }
    battery.push_back({"m" + std::to_string(m), std::move(pe)});
  }
  const auto rep = verify_appendix_inequalities(battery, 3.0, 1.5);
  EXPECT_LE(rep.max_violation(), 1e-10);
  EXPECT_THROW(verify_appendix_inequalities(battery, 2.0, 3.0), DomainError);
}

TEST(Templates, CompileAndEvaluate) {
  const auto t = compile_template(nlohmann::json::parse(R"({"op": "sum", "terms": [
      {"op": "power", "of": {"op": "increment", "from": 1, "to": 2}, "n": 2},
      {"op": "scale", "by": 2, "of": {"op": "coord", "index": 1}},
      {"op": "put", "of": {"op": "coord", "index": 0}, "strike": 1}]})"));
  EXPECT_EQ(t.max_index, 2u);
  const std::vector<double> v{0.5, 2.0};
  EXPECT_DOUBLE_EQ(t.fn(v), 2.25 + 1.0 + 1.0);
  EXPECT_THROW(compile_template({{"op", "log"}}), ConfigError);
  EXPECT_THROW(compile_template_1d({{"op", "coord"}, {"index", 2}}), ConfigError);
  const auto p = compile_template_1d({{"op", "poly"}, {"of", {{"op", "coord"}, {"index", 1}}}, {"coefficients", {1, 0, 3}}});
  EXPECT_DOUBLE_EQ(p(2.0), 13.0);
}
