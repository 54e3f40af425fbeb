#pragma once

// Two traders under one supervisor. Trader a believes gamma == 1, trader b gamma == 1/2;
// the supervisor prices with the whole interval [sigma_low, sigma_high] and so bounds
// both of them: -E[-X] <= E^a[X], E^b[X] <= E[X].

#include <cstddef>
#include <cstdint>
#include <string>

#include "gcalc/gexpectation.hpp"
#include "gcalc/pathspace.hpp"
#include "json.hpp"

namespace gcalc {

struct RiskDemoSpec {
  double sigma_low = 0.49;   ///< in [0, 1/2)
  double sigma_high = 1.0;   ///< >= 1
  double horizon = 1.0;      ///< >= 0
  std::string claim = "qv";  ///< qv: X = <B>_T; neg_qv: X = -<B>_T
  std::size_t n_paths = 2000;
  std::size_t steps = 10000;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct TraderEstimate {
  double gamma = 0.0;
  MeanStats stats;
};

struct RiskDemoReport {
  TraderEstimate trader_a;
  TraderEstimate trader_b;
  double lower = 0.0;  ///< -E[-X]
  double upper = 0.0;  ///<  E[X]
  double expected_a = 0.0;  ///< T (or -T for neg_qv)
  double expected_b = 0.0;  ///< T/4 (or -T/4)
  bool a_inside = false;  ///< within [lower, upper] up to 3 standard errors and slack
  bool b_inside = false;
  double slack = 0.0;

  nlohmann::json to_json() const;
};

/// `slack` widens the bounds test for the PDE discretisation error of lower and upper.
RiskDemoReport run_risk_demo(const RiskDemoSpec& spec, const ExpectationConfig& cfg = {},
                             double slack = 2e-3, const MonteCarloBudget& budget = {});

}  // namespace gcalc
