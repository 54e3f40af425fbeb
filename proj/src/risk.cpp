#include "gcalc/risk.hpp"

#include <cmath>

#include "gcalc/errors.hpp"

namespace gcalc {

void RiskDemoSpec::validate() const {
  if (!(sigma_low >= 0.0 && sigma_low < 0.5)) throw ConfigError("risk.sigma_low", "must lie in [0, 0.5)");
  if (!(sigma_high >= 1.0) || !std::isfinite(sigma_high)) throw ConfigError("risk.sigma_high", "must be >= 1");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("risk.horizon", "must be >= 0");
  if (claim != "qv" && claim != "neg_qv") throw ConfigError("risk.claim", "must be 'qv' or 'neg_qv'");
  if (n_paths < 2) throw ConfigError("risk.n_paths", "must be >= 2");
  if (steps < 1) throw ConfigError("risk.steps", "must be >= 1");
}

nlohmann::json RiskDemoReport::to_json() const {
  auto trader = [](const TraderEstimate& t, double expected, bool inside) {
    return nlohmann::json{{"gamma", t.gamma},
                          {"estimate", t.stats.mean},
                          {"standard_error", t.stats.standard_error},
                          {"paths", t.stats.count},
                          {"expected", expected},
                          {"inside_bounds", inside}};
  };
  return {{"trader_a", trader(trader_a, expected_a, a_inside)},
          {"trader_b", trader(trader_b, expected_b, b_inside)},
          {"supervisor", {{"lower", lower}, {"upper", upper}}},
          {"slack", slack}};
}

RiskDemoReport run_risk_demo(const RiskDemoSpec& spec, const ExpectationConfig& cfg, double slack,
                             const MonteCarloBudget& budget) {
  spec.validate();
  const double sign = spec.claim == "qv" ? 1.0 : -1.0;
  RiskDemoReport rep;
  rep.trader_a.gamma = 1.0;
  rep.trader_b.gamma = 0.5;
  rep.slack = slack;
  rep.expected_a = sign * spec.horizon;
  rep.expected_b = sign * spec.horizon / 4.0;

  if (spec.horizon == 0.0) {
    // <B>_0 = 0 under every scenario; nothing to simulate or solve.
    rep.trader_a.stats = {0.0, 0.0, spec.n_paths};
    rep.trader_b.stats = {0.0, 0.0, spec.n_paths};
    rep.a_inside = rep.b_inside = true;
    return rep;
  }

  const auto gamma = UncertaintySet::interval(spec.sigma_low, spec.sigma_high);
  const Direction a{1.0};
  const auto part = Partition::uniform(spec.horizon, spec.steps);
  const std::vector<ScenarioControl> traders{ScenarioControl::constant(part, VolMatrix::scalar(1.0), "trader_a"),
                                             ScenarioControl::constant(part, VolMatrix::scalar(0.5), "trader_b")};
  const PathFunctional claim = [&a, sign](const SamplePath& p) { return sign * quadratic_variation(p, a).back(); };
  const auto ens = simulate_family(claim, traders, spec.n_paths, spec.seed, budget);
  rep.trader_a.stats = mean_stats(ens[0].values);
  rep.trader_b.stats = mean_stats(ens[1].values);

  // The supervisor's bounds go through the PDE engine. <B>_T enters through B_T^2:
  // B_T^2 - <B>_T is a symmetric G-martingale, so both carry the same upper and lower price.
  CylinderFunctional x{{spec.horizon}, a, [sign](std::span<const double> v) { return sign * v[0] * v[0]; }};
  CylinderFunctional neg{{spec.horizon}, a, [sign](std::span<const double> v) { return -sign * v[0] * v[0]; }};
  rep.upper = expect(x, gamma, cfg);
  rep.lower = -expect(neg, gamma, cfg);

  auto inside = [&](const MeanStats& s) {
    const double w = 3.0 * s.standard_error + slack;
    return s.mean >= rep.lower - w && s.mean <= rep.upper + w;
  };
  rep.a_inside = inside(rep.trader_a.stats);
  rep.b_inside = inside(rep.trader_b.stats);
  return rep;
}

}  // namespace gcalc
