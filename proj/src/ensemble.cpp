#include "gcalc/ensemble.hpp"

#include <cmath>
#include <limits>

#include "gcalc/errors.hpp"

namespace gcalc {

MeanStats mean_stats(std::span<const double> values) {
  MeanStats s;
  s.count = values.size();
  if (values.empty()) return s;
  // Welford
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  s.mean = mean;
  if (n > 1) s.standard_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  return s;
}

namespace {

SupEstimate pick_sup(std::vector<MeanStats> stats) {
  SupEstimate est;
  est.value = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < stats.size(); ++s) {
    if (stats[s].mean > est.value) {
      est.value = stats[s].mean;
      est.argmax = s;
      est.standard_error = stats[s].standard_error;
    }
  }
  est.per_scenario = std::move(stats);
  return est;
}

}  // namespace

SupEstimate sup_mean(const Ensemble& ensemble, const std::function<double(double)>& f) {
  if (ensemble.empty()) throw DomainError("ensemble is empty");
  std::vector<MeanStats> stats;
  std::vector<double> buf;
  for (const auto& sc : ensemble) {
    if (sc.values.empty()) throw DomainError("scenario '" + sc.label + "' has no samples");
    buf.resize(sc.values.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f(sc.values[i]);
    stats.push_back(mean_stats(buf));
  }
  return pick_sup(std::move(stats));
}

SupEstimate sup_mean(const PairedEnsemble& ensemble, const std::function<double(double, double)>& f) {
  if (ensemble.empty()) throw DomainError("ensemble is empty");
  std::vector<MeanStats> stats;
  std::vector<double> buf;
  for (const auto& sc : ensemble) {
    if (sc.x.empty() || sc.x.size() != sc.y.size()) {
      throw DomainError("scenario '" + sc.label + "' has empty or unpaired samples");
    }
    buf.resize(sc.x.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f(sc.x[i], sc.y[i]);
    stats.push_back(mean_stats(buf));
  }
  return pick_sup(std::move(stats));
}

}  // namespace gcalc
