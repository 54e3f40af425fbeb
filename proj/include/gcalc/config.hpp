#pragma once

// Run configuration: one JSON document (comments allowed) with sections
// gamma, pde, paths, sde, suite, price, jensen, risk. Grammar in docs/config.md.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcalc/gexpectation.hpp"
#include "gcalc/gheat.hpp"
#include "gcalc/sublinear.hpp"
#include "json.hpp"

namespace gcalc {

struct PathsConfig {
  std::uint64_t seed = 20240611;
  std::size_t n_paths = 2000;
  std::size_t steps = 1000;
  double horizon = 1.0;
  std::size_t ladder_levels = 5;
  double max_normals = 4e9;
};

struct SdeConfig {
  std::string model = "geometric";
  nlohmann::json params = nlohmann::json::object();
  double horizon = 1.0;
  std::size_t steps = 100;
  std::size_t n_paths = 400;
  std::size_t iterations = 8;
  double weight = 0.0;  ///< <= 0: use the derived Picard constant
};

struct SuiteConfig {
  double pde_tolerance = 2e-3;
  std::size_t qv_paths = 10000;
  std::size_t qv_steps = 100000;
  std::size_t identity_paths = 200;
  std::size_t ito_paths = 10000;
  std::size_t ito_steps = 64;
  std::size_t residual_paths = 2000;
  std::size_t residual_base_steps = 16;
  std::size_t residual_levels = 6;
  std::size_t mean_paths = 10000;
  std::size_t appendix_paths = 10000;
  std::size_t prefix_points = 201;
  std::size_t inner_points = 401;
  nlohmann::json battery;  ///< optional axiom battery document; null selects the built-in one
};

struct PriceConfig {
  nlohmann::json payoff = {{"op", "call"}, {"of", {{"op", "coord"}, {"index", 1}}}, {"strike", 0.0}};
  double t = 1.0;
  std::vector<double> x{0.0};
  std::vector<double> direction{1.0};
  std::size_t lower_bound_paths = 0;  ///< > 0 adds a scenario-sup lower bound
  std::size_t lower_bound_steps = 200;
};

struct JensenConfig {
  std::string function = "square";
  std::vector<double> coefficients;
  nlohmann::json phi = {{"op", "coord"}, {"index", 1}};
  double horizon = 1.0;
  std::vector<double> direction{1.0};
};

struct RiskConfig {
  double sigma_low = 0.49;
  double sigma_high = 1.0;
  double horizon = 1.0;
  std::string claim = "qv";  ///< qv | neg_qv
  std::size_t n_paths = 2000;
  std::size_t steps = 10000;
};

struct Config {
  UncertaintySet gamma = UncertaintySet::interval(0.5, 1.0);
  SolverConfig pde;
  PathsConfig paths;
  SdeConfig sde;
  SuiteConfig suite;
  PriceConfig price;
  JensenConfig jensen;
  RiskConfig risk;

  ExpectationConfig expectation() const;

  nlohmann::json to_json() const;
  /// Missing keys keep defaults; unknown keys and bad values throw ConfigError naming the field.
  static Config from_json(const nlohmann::json& j);
  /// Reads a file, allowing // and /* */ comments.
  static Config load(const std::string& path);
  static nlohmann::json parse_document(const std::string& text, const std::string& origin = "config");
};

/// Environment overrides. GCALC_SEED, GCALC_PATHS, GCALC_GRID_POINTS apply to paths.seed,
/// paths.n_paths, pde.grid_points; GCALC_<SECTION>__<KEY> sets any key of a section
/// (value parsed as JSON, else taken as a string). Applied on the document model.
void apply_env_overrides(nlohmann::json& doc, const std::map<std::string, std::string>& env);

/// Current process environment, restricted to GCALC_ variables.
std::map<std::string, std::string> gcalc_environment();

}  // namespace gcalc
