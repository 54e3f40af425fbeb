#include "gcalc/gexpectation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gcalc/errors.hpp"

namespace gcalc {

void CylinderFunctional::validate() const {
  if (times.empty() || times.size() > 3) {
    throw DimensionError("cylinder functionals support 1 to 3 observation times");
  }
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || !(t > prev)) {
      throw DomainError("observation times must be positive and strictly increasing");
    }
    prev = t;
  }
  if (!phi) throw DomainError("cylinder functional has no payoff");
  if (direction.dim() == 0) throw DimensionError("direction is empty");
}

// ---------------------------------------------------------------------------

ConditionalValue::ConditionalValue(std::vector<double> times, Direction direction,
                                   std::vector<Grid1D> grids, std::vector<double> values)
    : times_(std::move(times)),
      direction_(std::move(direction)),
      grids_(std::move(grids)),
      values_(std::move(values)) {
  if (grids_.empty() || grids_.size() > 2 || grids_.size() != times_.size()) {
    throw DimensionError("conditional value needs one grid per conditioning time (at most 2)");
  }
  std::size_t n = 1;
  for (const auto& g : grids_) n *= g.size();
  if (n != values_.size()) throw DimensionError("conditional value size does not match its grids");
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFiniteError("conditional value is not finite on its grid");
  }
}

std::vector<double> ConditionalValue::node(std::size_t idx) const {
  std::vector<double> out(grids_.size());
  for (std::size_t d = grids_.size(); d-- > 0;) {
    const std::size_t n = grids_[d].size();
    out[d] = grids_[d].node(idx % n);
    idx /= n;
  }
  return out;
}

namespace {

// cell index and (possibly extrapolating) weight
void locate(const Grid1D& g, double v, std::size_t& i, double& w) {
  const double pos = (v + g.radius()) / g.dx();
  const double last = static_cast<double>(g.size() - 2);
  const double cell = std::clamp(std::floor(pos), 0.0, last);
  i = static_cast<std::size_t>(cell);
  w = pos - cell;
}

}  // namespace

double ConditionalValue::operator()(std::span<const double> prefix) const {
  if (prefix.size() < grids_.size()) throw DimensionError("prefix is shorter than the conditioning index");
  if (grids_.size() == 1) {
    std::size_t i;
    double w;
    locate(grids_[0], prefix[0], i, w);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
  }
  std::size_t ix, iy;
  double wx, wy;
  locate(grids_[0], prefix[0], ix, wx);
  locate(grids_[1], prefix[1], iy, wy);
  const std::size_t ny = grids_[1].size();
  auto v = [&](std::size_t a, std::size_t b) { return values_[a * ny + b]; };
  return (1 - wx) * (1 - wy) * v(ix, iy) + wx * (1 - wy) * v(ix + 1, iy) +
         (1 - wx) * wy * v(ix, iy + 1) + wx * wy * v(ix + 1, iy + 1);
}

CylinderFunctional ConditionalValue::as_functional() const {
  auto self = std::make_shared<const ConditionalValue>(*this);
  CylinderFunctional f;
  f.times = times_;
  f.direction = direction_;
  f.phi = [self](std::span<const double> x) { return (*self)(x); };
  f.growth = GrowthTag::polynomial;
  return f;
}

// ---------------------------------------------------------------------------

namespace {

struct Reducer {
  const ExpectationConfig& cfg;
  DirectionalVariance var;
  double sigma_max;

  // Integrates out the last argument: E[phi(x^1..x^{j-1}, x^{j-1} + (B_{t_j} - B_{t_{j-1}}))].
  ConditionalValue reduce_last(const CylinderFunctional& f) const {
    const std::size_t j = f.arity();
    const std::size_t k = j - 1;
    std::vector<Grid1D> grids;
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
      grids.emplace_back(domain_radius(cfg.solver, sigma_max, f.times[i], 0.0), cfg.prefix_points);
      total *= cfg.prefix_points;
    }
    const double h = f.times[j - 1] - f.times[j - 2];

    SolverConfig inner = cfg.solver;
    inner.n_points = cfg.inner_points | 1U;  // odd, so z = 0 is a node
    const Grid1D ig(domain_radius(inner, sigma_max, h, 0.0), inner.n_points);
    const std::size_t steps = step_count(inner, sigma_max, ig.dx(), h);
    const std::size_t center = (ig.size() - 1) / 2;

    std::vector<double> values(total);
    std::vector<double> arg(j);
    GridFunction u(ig, std::vector<double>(ig.size()), 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      for (std::size_t d = k; d-- > 0;) {
        arg[d] = grids[d].node(rem % cfg.prefix_points);
        rem /= cfg.prefix_points;
      }
      const double last = arg[k - 1];
      if (steps == 0) {
        arg[k] = last;
        values[idx] = f.phi(arg);
        continue;
      }
      for (std::size_t i = 0; i < ig.size(); ++i) {
        arg[k] = last + ig.node(i);
        const double v = f.phi(arg);
        if (!std::isfinite(v)) throw NonFiniteError("payoff is not finite on a nested grid");
        u.values[i] = v;
      }
      u.time_stamp = 0.0;
      advance(u, var.plus, var.minus, h, steps, inner.boundary);
      values[idx] = u.values[center];
    }
    std::vector<double> times(f.times.begin(), f.times.begin() + static_cast<std::ptrdiff_t>(k));
    return ConditionalValue(std::move(times), f.direction, std::move(grids), std::move(values));
  }
};

Reducer make_reducer(const CylinderFunctional& x, const UncertaintySet& gamma,
                     const ExpectationConfig& cfg) {
  x.validate();
  cfg.solver.validate();
  if (cfg.prefix_points < 3 || cfg.inner_points < 3) throw DomainError("nested grids need at least 3 nodes");
  if (x.direction.dim() != gamma.dim()) throw DimensionError("direction and uncertainty set dimensions differ");
  const auto var = directional_variance(gamma, x.direction);
  return Reducer{cfg, var, std::max(var.plus, -var.minus)};
}

}  // namespace

double expect(const CylinderFunctional& x, const UncertaintySet& gamma, const ExpectationConfig& cfg) {
  const auto r = make_reducer(x, gamma, cfg);
  CylinderFunctional f = x;
  while (f.arity() > 1) f = r.reduce_last(f).as_functional();
  const CylinderPayoff phi = f.phi;
  const Payoff1D payoff = [&phi](double v) { return phi(std::span<const double>(&v, 1)); };
  const std::vector<double> origin(gamma.dim(), 0.0);
  return evaluate_pt(gamma, f.direction, payoff, f.times[0], origin, cfg.solver);
}

ConditionalValue conditional_expect(const CylinderFunctional& x, std::size_t k,
                                    const UncertaintySet& gamma, const ExpectationConfig& cfg) {
  const auto r = make_reducer(x, gamma, cfg);
  if (k < 1 || k >= x.arity()) throw DomainError("conditioning index must satisfy 1 <= k < m");
  ConditionalValue cv = r.reduce_last(x);
  while (cv.dims() > k) cv = r.reduce_last(cv.as_functional());
  return cv;
}

// ---------------------------------------------------------------------------

double lp_norm(const Ensemble& samples, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm requires finite p >= 1");
  const auto est = sup_mean(samples, [p](double v) { return std::pow(std::abs(v), p); });
  return std::pow(est.value, 1.0 / p);
}

double InequalityReport::max_violation() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : worst) m = std::max(m, v);
  return m;
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : worst) {
    j[k] = {{"worst_violation", v}, {"case", worst_case.at(k)}};
  }
  return j;
}

namespace {

void record(InequalityReport& rep, const std::string& key, double value, const std::string& name) {
  auto it = rep.worst.find(key);
  if (it == rep.worst.end() || value > it->second) {
    rep.worst[key] = value;
    rep.worst_case[key] = name;
  }
}

}  // namespace

InequalityReport verify_appendix_inequalities(const std::vector<NamedPairedEnsemble>& battery,
                                              double p, double q) {
  if (!(p > 1.0) || !(q > 1.0) || std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12) {
    throw DomainError("exponents must satisfy p, q > 1 and 1/p + 1/q = 1");
  }
  if (battery.empty()) throw DomainError("inequality battery is empty");
  InequalityReport rep;
  for (const auto& entry : battery) {
    const auto& e = entry.ensemble;
    auto moment = [&](double r, auto f) {
      return sup_mean(e, [r, f](double x, double y) { return std::pow(std::abs(f(x, y)), r); }).value;
    };
    auto fx = [](double x, double) { return x; };
    auto fy = [](double, double y) { return y; };
    auto fsum = [](double x, double y) { return x + y; };
    auto fprod = [](double x, double y) { return x * y; };
    auto norm = [&](double r, auto f) { return std::pow(moment(r, f), 1.0 / r); };

    for (double r : {0.5, 1.0, 2.0, p}) {
      const double cr = std::max(1.0, std::pow(2.0, r - 1.0));
      record(rep, "c_r", moment(r, fsum) - cr * (moment(r, fx) + moment(r, fy)), entry.name);
    }
    record(rep, "hoelder", moment(1.0, fprod) - norm(p, fx) * norm(q, fy), entry.name);
    record(rep, "minkowski", norm(p, fsum) - norm(p, fx) - norm(p, fy), entry.name);
    record(rep, "norm_monotone", std::max(norm(1.0, fx) - norm(p, fx), norm(1.0, fy) - norm(p, fy)),
           entry.name);
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t interior_nodes_check(const ConditionalValue& cv, double fraction,
                                 const std::function<void(std::size_t, const std::vector<double>&)>& fn) {
  std::size_t used = 0;
  for (std::size_t idx = 0; idx < cv.node_count(); ++idx) {
    const auto x = cv.node(idx);
    bool inside = true;
    for (std::size_t d = 0; d < x.size(); ++d) {
      if (std::abs(x[d]) > fraction * cv.grid(d).radius() + 1e-12) inside = false;
    }
    if (!inside) continue;
    fn(idx, x);
    ++used;
  }
  return used;
}

CylinderPayoff plus(CylinderPayoff a, CylinderPayoff b) {
  return [a, b](std::span<const double> x) { return a(x) + b(x); };
}

CylinderPayoff scaled(double c, CylinderPayoff a) {
  return [c, a](std::span<const double> x) { return c * a(x); };
}

CylinderPayoff constant(double c) {
  return [c](std::span<const double>) { return c; };
}

}  // namespace

InequalityReport verify_expectation_axioms(const UncertaintySet& gamma, const AxiomBattery& battery,
                                           const ExpectationConfig& cfg) {
  if (battery.cases.empty() && battery.stationarity.empty()) throw DomainError("axiom battery is empty");
  InequalityReport rep;
  const double frac = battery.interior_fraction;

  for (const auto& c : battery.cases) {
    const std::size_t m = c.times.size();
    if (!c.x || !c.y) throw DomainError("axiom case '" + c.name + "' lacks X or Y");
    if (c.k < 1 || c.k >= m) throw DomainError("axiom case '" + c.name + "' has k outside [1, m)");
    auto functional = [&](CylinderPayoff phi) {
      return CylinderFunctional{c.times, battery.direction, std::move(phi), GrowthTag::polynomial};
    };
    auto E = [&](CylinderPayoff phi) { return expect(functional(std::move(phi)), gamma, cfg); };
    auto C = [&](CylinderPayoff phi) { return conditional_expect(functional(std::move(phi)), c.k, gamma, cfg); };

    const double ex = E(c.x);
    const double ey = E(c.y);
    // (a)-(e)
    if (c.x_dominates_y) record(rep, "monotonicity", std::max(0.0, ey - ex), c.name);
    record(rep, "constants", std::abs(E(constant(c.constant)) - c.constant), c.name);
    record(rep, "subadditivity", std::max(0.0, E(plus(c.x, c.y)) - ex - ey), c.name);
    record(rep, "homogeneity", std::abs(E(scaled(c.lambda, c.x)) - c.lambda * ex), c.name);
    record(rep, "translation", std::abs(E(plus(c.x, constant(c.constant))) - ex - c.constant), c.name);

    const ConditionalValue cx = C(c.x);
    const ConditionalValue cy = C(c.y);
    const ConditionalValue cneg_x = C(scaled(-1.0, c.x));
    const ConditionalValue cdiff = C(plus(c.x, scaled(-1.0, c.y)));

    double worst = 0.0;
    if (c.x_dominates_y) {
      interior_nodes_check(cx, frac, [&](std::size_t i, const auto&) {
        worst = std::max(worst, cy.node_value(i) - cx.node_value(i));
      });
      record(rep, "cond_monotonicity", worst, c.name);
    }
    worst = 0.0;
    interior_nodes_check(cx, frac, [&](std::size_t i, const auto&) {
      worst = std::max(worst, cx.node_value(i) - cy.node_value(i) - cdiff.node_value(i));
    });
    record(rep, "cond_subadditivity", worst, c.name);

    if (c.y_zero_mean) {
      const ConditionalValue csum = C(plus(c.x, c.y));
      worst = 0.0;
      interior_nodes_check(cx, frac, [&](std::size_t i, const auto&) {
        worst = std::max(worst, std::abs(csum.node_value(i) - cx.node_value(i)));
      });
      record(rep, "zero_mean_additivity", worst, c.name);
    }

    // (iv): E[E[X|H_{t_k}]] = E[X] and, for k >= 2, E[E[X|H_{t_k}]|H_{t_1}] = E[X|H_{t_1}]
    record(rep, "tower", std::abs(expect(cx.as_functional(), gamma, cfg) - ex), c.name);
    if (c.k >= 2) {
      const auto outer = conditional_expect(cx.as_functional(), 1, gamma, cfg);
      const auto direct = conditional_expect(functional(c.x), 1, gamma, cfg);
      worst = 0.0;
      interior_nodes_check(outer, frac, [&](std::size_t i, const auto&) {
        worst = std::max(worst, std::abs(outer.node_value(i) - direct.node_value(i)));
      });
      record(rep, "tower", worst, c.name);
    }

    if (c.eta) {
      const double bound = battery.eta_bound;
      const std::size_t k = c.k;
      const CylinderPayoff eta_raw = c.eta;
      const CylinderPayoff eta = [eta_raw, bound, k](std::span<const double> x) {
        return std::clamp(eta_raw(x.first(k)), -bound, bound);
      };
      // (i) H_t-measurable variables are fixed by conditioning
      const ConditionalValue ceta = C(eta);
      worst = 0.0;
      interior_nodes_check(ceta, frac, [&](std::size_t i, const std::vector<double>& x) {
        worst = std::max(worst, std::abs(ceta.node_value(i) - eta(x)));
      });
      record(rep, "cond_measurable", worst, c.name);
      // (v)
      const ConditionalValue cshift = C(plus(c.x, eta));
      worst = 0.0;
      interior_nodes_check(cx, frac, [&](std::size_t i, const std::vector<double>& x) {
        worst = std::max(worst, std::abs(cshift.node_value(i) - cx.node_value(i) - eta(x)));
      });
      record(rep, "cond_translation", worst, c.name);
      // (vi)
      const CylinderPayoff x_fn = c.x;
      const ConditionalValue cprod =
          C([eta, x_fn](std::span<const double> x) { return eta(x) * x_fn(x); });
      worst = 0.0;
      interior_nodes_check(cx, frac, [&](std::size_t i, const std::vector<double>& x) {
        const double e = eta(x);
        const double split = std::max(e, 0.0) * cx.node_value(i) + std::max(-e, 0.0) * cneg_x.node_value(i);
        worst = std::max(worst, std::abs(cprod.node_value(i) - split));
      });
      record(rep, "cond_sign_split", worst, c.name);
    }
  }

  for (const auto& s : battery.stationarity) {
    if (!s.psi) throw DomainError("stationarity case '" + s.name + "' lacks psi");
    const auto psi = s.psi;
    const CylinderFunctional shifted{{s.s, s.s + s.t}, battery.direction,
                                     [psi](std::span<const double> x) { return psi(x[1] - x[0]); },
                                     GrowthTag::polynomial};
    const CylinderFunctional plain{{s.t}, battery.direction,
                                   [psi](std::span<const double> x) { return psi(x[0]); },
                                   GrowthTag::polynomial};
    const double base = expect(plain, gamma, cfg);
    record(rep, "stationarity", std::abs(expect(shifted, gamma, cfg) - base), s.name);
    // (vii): the increment is independent of H_s, so its conditional value is constant
    const auto cv = conditional_expect(shifted, 1, gamma, cfg);
    double worst = 0.0;
    interior_nodes_check(cv, frac, [&](std::size_t i, const auto&) {
      worst = std::max(worst, std::abs(cv.node_value(i) - base));
    });
    record(rep, "independence", worst, s.name);
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> read_times(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of times");
  std::vector<double> out;
  for (const auto& t : j) {
    if (!t.is_number()) throw ConfigError(field, "times must be numbers");
    out.push_back(t.get<double>());
  }
  double prev = 0.0;
  for (double t : out) {
    if (!(t > prev)) throw ConfigError(field, "times must be positive and strictly increasing");
    prev = t;
  }
  if (out.size() > 3) throw ConfigError(field, "at most 3 observation times are supported");
  return out;
}

CylinderPayoff read_payoff(const nlohmann::json& j, const std::string& field, std::size_t max_index) {
  auto c = compile_template(j, field);
  if (c.max_index > max_index) throw ConfigError(field, "references a coordinate beyond the allowed prefix");
  return c.fn;
}

}  // namespace

AxiomBattery AxiomBattery::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("battery", "expected an object");
  AxiomBattery b;
  if (j.contains("direction")) {
    try {
      b.direction = Direction(j.at("direction").get<std::vector<double>>());
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("battery.direction", "expected an array of numbers");
    }
  }
  auto num = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ConfigError(std::string("battery.") + key, "expected a number");
    out = j.at(key).get<double>();
  };
  num("eta_bound", b.eta_bound);
  num("interior_fraction", b.interior_fraction);
  num("tolerance", b.tolerance);
  if (!(b.eta_bound > 0.0)) throw ConfigError("battery.eta_bound", "must be > 0");
  if (!(b.interior_fraction > 0.0 && b.interior_fraction <= 1.0)) {
    throw ConfigError("battery.interior_fraction", "must lie in (0, 1]");
  }

  if (j.contains("cases")) {
    std::size_t i = 0;
    for (const auto& cj : j.at("cases")) {
      const std::string field = "battery.cases[" + std::to_string(i++) + "]";
      AxiomCase c;
      c.name = cj.value("name", field);
      if (!cj.contains("times")) throw ConfigError(field + ".times", "missing");
      c.times = read_times(cj.at("times"), field + ".times");
      c.k = cj.value("k", std::size_t{1});
      if (c.k < 1 || c.k >= c.times.size()) throw ConfigError(field + ".k", "must satisfy 1 <= k < m");
      if (!cj.contains("x") || !cj.contains("y")) throw ConfigError(field, "needs both 'x' and 'y'");
      c.x = read_payoff(cj.at("x"), field + ".x", c.times.size());
      c.y = read_payoff(cj.at("y"), field + ".y", c.times.size());
      if (cj.contains("eta")) c.eta = read_payoff(cj.at("eta"), field + ".eta", c.k);
      c.x_dominates_y = cj.value("x_dominates_y", false);
      c.y_zero_mean = cj.value("y_zero_mean", false);
      c.lambda = cj.value("lambda", 2.0);
      c.constant = cj.value("constant", 1.5);
      if (!(c.lambda >= 0.0)) throw ConfigError(field + ".lambda", "must be >= 0");
      b.cases.push_back(std::move(c));
    }
  }
  if (j.contains("stationarity")) {
    std::size_t i = 0;
    for (const auto& sj : j.at("stationarity")) {
      const std::string field = "battery.stationarity[" + std::to_string(i++) + "]";
      StationarityCase s;
      s.name = sj.value("name", field);
      if (!sj.contains("psi")) throw ConfigError(field + ".psi", "missing");
      s.psi = compile_template_1d(sj.at("psi"), field + ".psi");
      s.s = sj.value("s", 0.5);
      s.t = sj.value("t", 1.0);
      if (!(s.s > 0.0) || !(s.t > 0.0)) throw ConfigError(field, "s and t must be > 0");
      b.stationarity.push_back(std::move(s));
    }
  }
  if (b.cases.empty() && b.stationarity.empty()) throw ConfigError("battery", "no cases");
  return b;
}

AxiomBattery default_axiom_battery() {
  using std::span;
  AxiomBattery b;
  const std::vector<double> t12{1.0, 2.0};
  auto b1 = [](span<const double> x) { return x[0]; };

  b.cases.push_back({"square_vs_negated", t12, [](span<const double> x) { return x[1] * x[1]; },
                     [](span<const double> x) { return -x[1] * x[1]; }, b1, 1, false, false, 2.0, 1.5});
  b.cases.push_back({"call_spread", t12, [](span<const double> x) { return std::max(x[1] - 0.5, 0.0); },
                     [](span<const double> x) { return std::max(x[1] - 1.0, 0.0); },
                     [](span<const double> x) { return std::sin(x[0]); }, 1, true, false, 3.0, -0.7});
  b.cases.push_back({"additive_zero_mean", t12, [](span<const double> x) { return x[0] * x[0]; },
                     [](span<const double> x) { return x[1] - x[0]; },
                     [](span<const double> x) { return -x[0]; }, 1, false, true, 0.5, 2.0});
  b.cases.push_back({"weighted_increments", t12,
                     [](span<const double> x) { return x[0] * (x[1] - x[0]) * (x[1] - x[0]); },
                     [](span<const double> x) { return std::cos(x[0]) * (x[1] - x[0]); },
                     [](span<const double> x) { return x[0] * x[0] - 1.0; }, 1, false, true, 2.0, 1.0});
  b.cases.push_back({"constants", t12, [](span<const double>) { return 1.5; },
                     [](span<const double>) { return -0.5; },
                     [](span<const double>) { return 0.7; }, 1, true, false, 4.0, -3.0});

  auto sq = [](double v) { return v * v; };
  auto ab = [](double v) { return std::abs(v); };
  auto call = [](double v) { return std::max(v, 0.0); };
  auto negsq = [](double v) { return -v * v; };
  b.stationarity.push_back({"square_s0.5_t1", sq, 0.5, 1.0});
  b.stationarity.push_back({"abs_s1_t0.5", ab, 1.0, 0.5});
  b.stationarity.push_back({"call_s2_t1", call, 2.0, 1.0});
  b.stationarity.push_back({"neg_square_s0.3_t1.7", negsq, 0.3, 1.7});
  return b;
}

}  // namespace gcalc
