#include <gtest/gtest.h>

#include "gcalc/errors.hpp"
#include "gcalc/suites.hpp"

using namespace gcalc;

TEST(Measurement, Relations) {
  CheckResult r("x", "x");
  r.at_most("a", 1.0, 2.0);
  r.at_least("b", 3.0, 2.0);
  r.require("c", true);
  EXPECT_TRUE(r.passed());
  r.at_most("d", 3.0, 2.0);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.worst()->name, "d");
  EXPECT_EQ(r.summary_line().substr(0, 6), "FAIL x");
}

TEST(Measurement, NanFailsAndTimingHidden) {
  CheckResult r("n", "n");
  r.at_most("nan", std::nan(""), 1.0);
  EXPECT_FALSE(r.passed());
  Measurement t{"secs", 3.0, 10.0, true, true};
  EXPECT_FALSE(t.to_json().contains("measured"));
  EXPECT_TRUE(CheckResult().passed() == false);  // no parts: nothing was shown
}

TEST(Suites, Names) {
  EXPECT_EQ(acceptance_check_ids().size(), 12u);
  EXPECT_EQ(suite_check_ids("acceptance"), acceptance_check_ids());
  EXPECT_EQ(suite_check_ids("sde"), std::vector<std::string>{"picard"});
  EXPECT_THROW(suite_check_ids("speed"), ConfigError);
  EXPECT_THROW(run_check("speed", Config{}), ConfigError);
}

TEST(Suites, SdeSuitePassesAndIsDeterministic) {
  Config c;
  c.sde.n_paths = 100;
  c.suite.mean_paths = 2000;
  const auto a = run_suite("sde", c);
  const auto b = run_suite("sde", c);
  EXPECT_TRUE(a.passed()) << a.to_json().dump(2);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Suites, ErrorsAreRecordedNotThrown) {
  Config c;
  c.paths.max_normals = 10.0;  // every Monte Carlo check exceeds the budget
  const auto r = run_check("risk_demo", c);
  EXPECT_FALSE(r.passed());
  EXPECT_NE(r.error.find("budget"), std::string::npos) << r.error;
}
