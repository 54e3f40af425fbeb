#include <gtest/gtest.h>

#include <cmath>

#include "gcalc/errors.hpp"
#include "gcalc/sublinear.hpp"
#include "support.hpp"

using namespace gcalc;
using gtest_support::Gen;

namespace {

// sup over a fine grid of the set; corners are on the grid, so the sup is exact.
double brute_interval(double lo, double hi, double a) {
  double best = -1e300;
  for (int i = 0; i <= 400; ++i) {
    const double s = lo + (hi - lo) * i / 400.0;
    best = std::max(best, 0.5 * s * s * a);
  }
  return best;
}

double brute_box(const std::vector<AxisInterval>& axes, const SymMatrix& a) {
  double best = -1e300;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double s0 = axes[0].lo + (axes[0].hi - axes[0].lo) * i / 40.0;
      const double s1 = axes[1].lo + (axes[1].hi - axes[1].lo) * j / 40.0;
      best = std::max(best, 0.5 * (s0 * s0 * a(0, 0) + s1 * s1 * a(1, 1)));
    }
  }
  return best;
}

double trace_ggt_a(const VolMatrix& g, const SymMatrix& a) {
  const std::size_t d = g.dim();
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double ggt = 0.0;
      for (std::size_t k = 0; k < d; ++k) ggt += g(i, k) * g(j, k);
      tr += ggt * a(j, i);
    }
  }
  return tr;
}

}  // namespace

TEST(Generator, IntervalMatchesBruteForce) {
  for (double a : {-3.0, -0.5, 0.0, 0.7, 2.0}) {
    EXPECT_NEAR(g_value(UncertaintySet::interval(0.5, 1.0), SymMatrix::scalar(a)), brute_interval(0.5, 1.0, a), 1e-14);
  }
  EXPECT_DOUBLE_EQ(g_value(UncertaintySet::interval(0.5, 1.0), SymMatrix::scalar(1.0)), 0.5);
  EXPECT_DOUBLE_EQ(g_value(UncertaintySet::interval(0.5, 1.0), SymMatrix::scalar(-1.0)), -0.125);
}

TEST(Generator, DiagonalBoxMatchesBruteForce) {
  const std::vector<AxisInterval> axes{{0.2, 1.0}, {0.5, 1.5}};
  const auto box = UncertaintySet::diagonal_box(axes);
  Gen gen(1);
  for (int k = 0; k < 50; ++k) {
    const auto a = gen.sym(2);
    EXPECT_NEAR(g_value(box, a), brute_box(axes, a), 1e-12);
  }
}

TEST(Generator, MatrixSetIsMaxOverMembers) {
  const std::vector<VolMatrix> ms{VolMatrix::from_rows({{1.0, 0.2}, {0.0, 0.5}}),
                                  VolMatrix::from_rows({{0.3, 0.0}, {0.4, 1.1}})};
  const auto set = UncertaintySet::matrix_set(ms);
  Gen gen(2);
  for (int k = 0; k < 50; ++k) {
    const auto a = gen.sym(2);
    const double oracle = 0.5 * std::max(trace_ggt_a(ms[0], a), trace_ggt_a(ms[1], a));
    EXPECT_NEAR(g_value(set, a), oracle, 1e-12);
  }
}

TEST(Generator, SingletonIsLinear) {
  const auto set = UncertaintySet::singleton(VolMatrix::scalar(0.8));
  EXPECT_NEAR(g_value(set, SymMatrix::scalar(2.0)) + g_value(set, SymMatrix::scalar(-2.0)), 0.0, 1e-15);
}

// Sublinearity, homogeneity and monotonicity in A over random symmetric matrices.
TEST(GeneratorProperty, SublinearMonotoneHomogeneous) {
  const std::vector<UncertaintySet> sets{
      UncertaintySet::interval(0.3, 1.2),
      UncertaintySet::diagonal_box({{0.1, 1.0}, {0.6, 0.9}}),
      UncertaintySet::matrix_set({VolMatrix::from_rows({{1.0, 0.3}, {-0.2, 0.7}}),
                                  VolMatrix::from_rows({{0.5, 0.0}, {0.1, 1.0}}),
                                  VolMatrix::from_rows({{0.2, 0.9}, {0.9, 0.2}})}),
  };
  Gen gen(3);
  for (const auto& s : sets) {
    const std::size_t d = s.dim();
    for (int k = 0; k < 200; ++k) {
      const auto a = gen.sym(d), b = gen.sym(d);
      const double lam = gen.uniform(0.0, 5.0);
      EXPECT_LE(g_value(s, a + b), g_value(s, a) + g_value(s, b) + 1e-12);
      EXPECT_NEAR(g_value(s, a * lam), lam * g_value(s, a), 1e-12 * (1.0 + lam));
      // A + v v^T dominates A
      const auto v = gen.vec(d);
      EXPECT_GE(g_value(s, a + SymMatrix::outer(Direction(v))), g_value(s, a) - 1e-12);
      EXPECT_GE(g_value(s, a) + g_value(s, -a), -1e-12);
    }
    EXPECT_EQ(g_value(s, SymMatrix(d)), 0.0);
  }
}

TEST(GeneratorProperty, DirectionalReduction) {
  const auto s = UncertaintySet::matrix_set({VolMatrix::from_rows({{1.0, 0.3}, {-0.2, 0.7}}),
                                             VolMatrix::from_rows({{0.5, 0.0}, {0.1, 1.0}})});
  Gen gen(4);
  for (int k = 0; k < 100; ++k) {
    const Direction a(gen.vec(2));
    const double beta = gen.uniform(-3.0, 3.0);
    EXPECT_NEAR(g_directional(s, a, beta), g_value(s, SymMatrix::outer(a) * beta), 1e-12);
    const auto dv = directional_variance(s, a);
    EXPECT_GE(dv.plus, 0.0);
    EXPECT_LE(dv.minus, 0.0);
    EXPECT_NEAR(dv.plus, sigma_of(s, SymMatrix::outer(a)), 1e-14);
  }
}

TEST(UncertaintySet, ValidationAndContains) {
  EXPECT_THROW(UncertaintySet::interval(1.0, 0.5), DomainError);
  EXPECT_THROW(UncertaintySet::interval(-0.1, 0.5), DomainError);
  EXPECT_THROW(UncertaintySet::diagonal_box({}), DimensionError);
  EXPECT_THROW(UncertaintySet::matrix_set({VolMatrix::scalar(1.0), VolMatrix::diagonal(std::vector<double>{1, 1})}),
               DimensionError);
  const auto s = UncertaintySet::interval(0.5, 1.0);
  EXPECT_TRUE(s.contains(VolMatrix::scalar(0.75)));
  EXPECT_FALSE(s.contains(VolMatrix::scalar(1.1)));
  EXPECT_DOUBLE_EQ(s.max_variance(), 1.0);
}

TEST(UncertaintySet, JsonRoundTrip) {
  const std::vector<UncertaintySet> sets{
      UncertaintySet::interval(0.5, 1.0), UncertaintySet::diagonal_box({{0.1, 1.0}, {0.6, 0.9}}),
      UncertaintySet::matrix_set({VolMatrix::from_rows({{1.0, 0.3}, {-0.2, 0.7}})})};
  for (const auto& s : sets) EXPECT_TRUE(UncertaintySet::from_json(s.to_json()) == s) << s.to_json().dump();
  EXPECT_THROW(UncertaintySet::from_json({{"kind", "ellipse"}}), ConfigError);
  EXPECT_THROW(UncertaintySet::from_json({{"kind", "interval1d"}, {"sigma_low", 2.0}, {"sigma_high", 1.0}}),
               ConfigError);
}

TEST(Domination, NestedSets) {
  Gen gen(5);
  std::vector<SymMatrix> samples;
  for (int k = 0; k < 100; ++k) samples.push_back(gen.sym(1));
  const auto inner = UncertaintySet::interval(0.5, 1.0), outer = UncertaintySet::interval(0.4, 1.2);
  EXPECT_LE(check_domination(inner, outer, samples).max_violation, 0.0);
  EXPECT_GT(check_domination(outer, inner, samples).max_violation, 0.0);
}

TEST(SymMatrix, RejectsAsymmetricRows) {
  EXPECT_THROW(SymMatrix::from_rows({{1.0, 2.0}, {3.0, 1.0}}), DomainError);
  EXPECT_THROW(SymMatrix::from_rows({{1.0, 2.0}}), DimensionError);
}
