#pragma once

// Scenario ensembles: Monte Carlo samples grouped by the volatility scenario that
// generated them. The sup over scenarios of the sample mean is the scenario-sup
// estimator, a lower estimate of the G-expectation.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gcalc {

struct MeanStats {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

MeanStats mean_stats(std::span<const double> values);

struct ScenarioSamples {
  std::string label;
  std::vector<double> values;
};

struct PairedScenarioSamples {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

using Ensemble = std::vector<ScenarioSamples>;
using PairedEnsemble = std::vector<PairedScenarioSamples>;

struct SupEstimate {
  double value = 0.0;           ///< max over scenarios of the mean
  std::size_t argmax = 0;       ///< scenario attaining it
  double standard_error = 0.0;  ///< standard error of the mean at argmax
  std::vector<MeanStats> per_scenario;
};

/// sup_s mean_s f(X). Throws DomainError on an empty ensemble or empty scenario.
SupEstimate sup_mean(const Ensemble& ensemble,
                     const std::function<double(double)>& f = [](double v) { return v; });

SupEstimate sup_mean(const PairedEnsemble& ensemble, const std::function<double(double, double)>& f);

}  // namespace gcalc
