#pragma once

// Check batteries run by `gcalc suite` and the acceptance binary. Every check is a
// list of bounded measurements; a check passes when all of them hold. Failures and
// exceptions are recorded per check and never stop the rest of a suite.

#include <string>
#include <utility>
#include <vector>

#include "gcalc/config.hpp"
#include "json.hpp"

namespace gcalc {

struct Measurement {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool at_most = true;  ///< measured <= bound, else measured >= bound
  bool timing = false;  ///< wall-clock; kept out of JSON so reports stay reproducible
  bool flag = false;    ///< a yes/no requirement (measured 1 or 0)

  bool passed() const { return at_most ? measured <= bound : measured >= bound; }
  /// How close to failing: measured / bound style ratio, > 1 means failed.
  double severity() const;
  nlohmann::json to_json() const;
};

struct CheckResult {
  CheckResult() = default;
  CheckResult(std::string id_, std::string title_) : id(std::move(id_)), title(std::move(title_)) {}

  std::string id;
  std::string title;
  std::vector<Measurement> parts;
  nlohmann::json data = nlohmann::json::object();
  std::string error;  ///< what() of an exception raised by the check

  void at_most(std::string name, double measured, double bound);
  void at_least(std::string name, double measured, double bound);
  void require(std::string name, bool ok);

  bool passed() const;
  /// The part closest to (or furthest past) its bound; null when there are no parts.
  const Measurement* worst() const;
  /// "PASS id: worst part" style one-liner.
  std::string summary_line() const;
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Ids in acceptance order: moments, convex_concave, semigroup, axioms, quadratic_variation,
/// ito_isometry, ito_formula, martingale, jensen, picard, risk_demo, appendix.
const std::vector<std::string>& acceptance_check_ids();

/// Checks making up a suite (acceptance, axioms, calculus, sde, jensen); ConfigError otherwise.
std::vector<std::string> suite_check_ids(const std::string& suite);

/// Runs one check; exceptions become CheckResult::error.
CheckResult run_check(const std::string& id, const Config& cfg);

SuiteReport run_suite(const std::string& suite, const Config& cfg);

}  // namespace gcalc
