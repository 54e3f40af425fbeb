#include "gcalc/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcalc/errors.hpp"

namespace gcalc {

ScalarFunction2 scalar_function(const std::string& name, const std::vector<double>& coefficients) {
  ScalarFunction2 f;
  f.name = name;
  if (name == "linear") {
    f.h = [](double y) { return y; };
    f.dh = [](double) { return 1.0; };
    f.d2h = [](double) { return 0.0; };
  } else if (name == "neg_linear") {
    f.h = [](double y) { return -y; };
    f.dh = [](double) { return -1.0; };
    f.d2h = [](double) { return 0.0; };
  } else if (name == "square") {
    f.h = [](double y) { return y * y; };
    f.dh = [](double y) { return 2.0 * y; };
    f.d2h = [](double) { return 2.0; };
  } else if (name == "neg_square") {
    f.h = [](double y) { return -y * y; };
    f.dh = [](double y) { return -2.0 * y; };
    f.d2h = [](double) { return -2.0; };
  } else if (name == "exp") {
    f.h = [](double y) { return std::exp(y); };
    f.dh = f.h;
    f.d2h = f.h;
  } else if (name == "poly") {
    if (coefficients.empty()) throw ConfigError("jensen.coefficients", "poly needs at least one coefficient");
    const auto c = coefficients;
    auto horner = [](const std::vector<double>& p, double y) {
      double r = 0.0;
      for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * y + *it;
      return r;
    };
    std::vector<double> c1, c2;
    for (std::size_t i = 1; i < c.size(); ++i) c1.push_back(static_cast<double>(i) * c[i]);
    for (std::size_t i = 1; i < c1.size(); ++i) c2.push_back(static_cast<double>(i) * c1[i]);
    f.h = [c, horner](double y) { return horner(c, y); };
    f.dh = [c1, horner](double y) { return horner(c1, y); };
    f.d2h = [c2, horner](double y) { return horner(c2, y); };
  } else {
    throw ConfigError("jensen.function", "unknown function '" + name + "'");
  }
  return f;
}

std::vector<ConvexityProbe> default_probes(const UncertaintySet& gamma, const std::vector<double>& extra_y,
                                           const std::vector<Direction>& directions) {
  const std::size_t d = gamma.dim();
  std::vector<double> ys{-2.0, -1.0, 0.0, 1.0, 2.0};
  ys.insert(ys.end(), extra_y.begin(), extra_y.end());

  std::vector<std::vector<double>> zs{std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < d; ++i) {
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> z(d, 0.0);
      z[i] = sgn;
      zs.push_back(std::move(z));
    }
  }

  std::vector<SymMatrix> as{SymMatrix(d)};
  for (std::size_t i = 0; i < d; ++i) {
    const auto e = SymMatrix::outer(Direction::unit(d, i));
    as.push_back(e);
    as.push_back(-e);
  }
  std::vector<Direction> dirs = directions;
  if (dirs.empty()) dirs.push_back(Direction(std::vector<double>(d, 1.0)));
  for (const auto& a : dirs) {
    if (a.dim() != d) throw DimensionError("probe direction dimension differs from gamma");
    const auto o = SymMatrix::outer(a);
    as.push_back(o);
    as.push_back(-o);
  }

  std::vector<ConvexityProbe> out;
  for (double y : ys) {
    for (const auto& z : zs) {
      for (const auto& a : as) out.push_back({y, z, a});
    }
  }
  return out;
}

nlohmann::json ConvexityReport::to_json() const {
  std::vector<std::vector<double>> rows(worst.a.dim(), std::vector<double>(worst.a.dim()));
  for (std::size_t i = 0; i < worst.a.dim(); ++i) {
    for (std::size_t j = 0; j < worst.a.dim(); ++j) rows[i][j] = worst.a(i, j);
  }
  return {{"function", function},
          {"min_value", min_value},
          {"g_convex", g_convex},
          {"probes", probes},
          {"verdict_scope", "probe set only"},
          {"worst_probe", {{"y", worst.y}, {"z", worst.z}, {"A", rows}}}};
}

ConvexityReport is_g_convex(const ScalarFunction2& h, const UncertaintySet& gamma,
                            const std::vector<ConvexityProbe>& probes) {
  if (!h.h || !h.dh || !h.d2h) throw DomainError("G-convexity needs h, h' and h''");
  if (probes.empty()) throw DomainError("probe set is empty");
  ConvexityReport rep;
  rep.function = h.name;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.probes = probes.size();
  for (const auto& p : probes) {
    if (p.z.size() != gamma.dim() || p.a.dim() != gamma.dim()) throw DimensionError("probe dimension differs from gamma");
    const double d1 = h.dh(p.y), d2 = h.d2h(p.y);
    if (!std::isfinite(d1) || !std::isfinite(d2)) throw NonFiniteError("derivative is not finite on a probe");
    const SymMatrix m = p.a * d1 + SymMatrix::outer(Direction(p.z)) * d2;
    const double v = g_value(gamma, m) - d1 * g_value(gamma, p.a);
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.worst = p;
    }
  }
  rep.g_convex = rep.min_value >= -1e-10;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double interior_min(const ConditionalValue& cv, double fraction,
                    const std::function<double(std::size_t, const std::vector<double>&)>& f, double* max_out = nullptr) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < cv.node_count(); ++idx) {
    const auto x = cv.node(idx);
    bool inside = true;
    for (std::size_t d = 0; d < x.size(); ++d) {
      if (std::abs(x[d]) > fraction * cv.grid(d).radius() + 1e-12) inside = false;
    }
    if (!inside) continue;
    const double v = f(idx, x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (max_out != nullptr) *max_out = hi;
  return lo;
}

}  // namespace

nlohmann::json JensenReport::to_json() const {
  return {{"expect_h_phi", expect_h_phi},
          {"expect_phi", expect_phi},
          {"delta", delta},
          {"conditional_min", conditional_min}};
}

JensenReport jensen_check(const ScalarFunction2& h, const std::function<double(double)>& phi,
                          const UncertaintySet& gamma, const Direction& a, double horizon,
                          const ExpectationConfig& cfg, double interior_fraction) {
  if (!h.h || !phi) throw DomainError("Jensen check needs h and phi");
  if (!(horizon > 0.0)) throw DomainError("Jensen check needs T > 0");
  const auto hf = h.h;
  const std::function<double(double)> h_phi = [hf, phi](double x) { return hf(phi(x)); };
  const std::vector<double> origin(gamma.dim(), 0.0);
  JensenReport rep;
  rep.expect_h_phi = evaluate_pt(gamma, a, h_phi, horizon, origin, cfg.solver);
  rep.expect_phi = evaluate_pt(gamma, a, phi, horizon, origin, cfg.solver);
  rep.delta = rep.expect_h_phi - hf(rep.expect_phi);

  const std::vector<double> times{0.5 * horizon, horizon};
  const auto c_hphi = conditional_expect(
      {times, a, [h_phi](std::span<const double> x) { return h_phi(x[1]); }, GrowthTag::polynomial}, 1, gamma, cfg);
  const auto c_phi = conditional_expect(
      {times, a, [phi](std::span<const double> x) { return phi(x[1]); }, GrowthTag::polynomial}, 1, gamma, cfg);
  rep.conditional_min = interior_min(c_hphi, interior_fraction, [&](std::size_t i, const auto&) {
    return c_hphi.node_value(i) - hf(c_phi.node_value(i));
  });
  return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json MartingaleReport::to_json() const {
  return {{"max_violation", max_violation},
          {"negated_gap_min", negated_gap_min},
          {"negated_gap_max", negated_gap_max},
          {"compensator_rate", compensator_rate}};
}

MartingaleReport compensated_martingale_check(const SymMatrix& eta, const std::vector<double>& phi,
                                              const UncertaintySet& gamma, double s, double t,
                                              const ExpectationConfig& cfg, double m0, double interior_fraction) {
  const std::size_t d = gamma.dim();
  if (eta.dim() != d || phi.size() != d) throw DimensionError("eta and phi must match the dimension of gamma");
  if (!(s > 0.0) || !(t > s)) throw DomainError("martingale check needs 0 < s < t");

  // eta = c a a^T, phi = k a
  double scale = 0.0;
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) scale = std::max(scale, std::abs(eta(i, j)));
    if (std::abs(eta(i, i)) > std::abs(eta(pivot, pivot))) pivot = i;
  }
  std::vector<double> av(d, 0.0);
  double c = 0.0;
  if (scale == 0.0) {
    double norm = 0.0;
    for (double v : phi) norm = std::max(norm, std::abs(v));
    if (norm == 0.0) av[0] = 1.0;
    else av = phi;
  } else {
    const double piv = eta(pivot, pivot);
    if (piv == 0.0) throw DomainError("eta must be a signed rank-one matrix c a a^T");
    c = piv > 0.0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < d; ++j) av[j] = eta(pivot, j) / std::sqrt(std::abs(piv));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (std::abs(eta(i, j) - c * av[i] * av[j]) > 1e-12 * scale) {
          throw DomainError("eta must be a signed rank-one matrix c a a^T");
        }
      }
    }
  }
  double aa = 0.0, pa = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    aa += av[j] * av[j];
    pa += phi[j] * av[j];
  }
  const double k = pa / aa;
  for (std::size_t j = 0; j < d; ++j) {
    if (std::abs(phi[j] - k * av[j]) > 1e-12 * std::max(1.0, std::abs(phi[j]))) {
      throw DomainError("phi must be parallel to the direction of eta");
    }
  }

  const Direction a(av);
  MartingaleReport rep;
  rep.compensator_rate = sigma_of(gamma, eta);
  const double rate = rep.compensator_rate;
  auto m_at = [m0, k, c, rate](double x, double time) { return m0 + k * x + c * x * x - rate * time; };
  const CylinderPayoff mt = [m0, k, c, rate, t](std::span<const double> x) {
    const double inc = x[1] - x[0];
    return m0 + k * x[1] + c * x[0] * x[0] + c * inc * inc - rate * t;
  };
  const std::vector<double> times{s, t};
  const auto cm = conditional_expect({times, a, mt, GrowthTag::polynomial}, 1, gamma, cfg);
  const auto cneg = conditional_expect(
      {times, a, [mt](std::span<const double> x) { return -mt(x); }, GrowthTag::polynomial}, 1, gamma, cfg);

  rep.max_violation = -interior_min(cm, interior_fraction, [&](std::size_t i, const std::vector<double>& x) {
    return -std::abs(cm.node_value(i) - m_at(x[0], s));
  });
  rep.negated_gap_min = interior_min(
      cneg, interior_fraction,
      [&](std::size_t i, const std::vector<double>& x) { return cneg.node_value(i) + m_at(x[0], s); },
      &rep.negated_gap_max);
  return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json SubmartingaleReport::to_json() const {
  return {{"min_margin", min_margin}, {"max_abs_margin", max_abs_margin}};
}

SubmartingaleReport submartingale_check(const ScalarFunction2& h, const CylinderFunctional& x,
                                        const UncertaintySet& gamma, double s, double t,
                                        const ExpectationConfig& cfg, double interior_fraction) {
  x.validate();
  if (!h.h) throw DomainError("submartingale check needs h");
  if (!(s > 0.0) || !(t > s)) throw DomainError("submartingale check needs 0 < s < t");
  const auto hf = h.h;
  ConditionalValue lhs = [&]() -> ConditionalValue {
    if (x.arity() == 1) {
      const double horizon = x.times[0];
      if (!(t < horizon)) throw DomainError("single-time X needs s < t < T");
      const auto phi = x.phi;
      const auto inner = conditional_expect(
          {{t, horizon}, x.direction, [phi](std::span<const double> v) { return phi(v.subspan(1, 1)); }, x.growth}, 1,
          gamma, cfg);
      const auto inner_fn = inner.as_functional().phi;
      return conditional_expect({{s, t},
                                 x.direction,
                                 [inner_fn, hf](std::span<const double> v) { return hf(inner_fn(v.subspan(1, 1))); },
                                 x.growth},
                                1, gamma, cfg);
    }
    const auto find = [&](double time) {
      for (std::size_t i = 0; i < x.arity(); ++i) {
        if (std::abs(x.times[i] - time) <= 1e-12 * std::max(1.0, time)) return i + 1;
      }
      throw DomainError("s and t must be observation times of a multi-time X");
    };
    const std::size_t ks = find(s), kt = find(t);
    CylinderFunctional outer;
    if (kt == x.arity()) {
      const auto phi = x.phi;
      outer = {x.times, x.direction, [phi, hf](std::span<const double> v) { return hf(phi(v)); }, x.growth};
    } else {
      const auto inner = conditional_expect(x, kt, gamma, cfg).as_functional();
      const auto fn = inner.phi;
      outer = {inner.times, x.direction, [fn, hf](std::span<const double> v) { return hf(fn(v)); }, x.growth};
    }
    return conditional_expect(outer, ks, gamma, cfg);
  }();

  ConditionalValue rhs = [&]() -> ConditionalValue {
    if (x.arity() == 1) {
      const auto phi = x.phi;
      return conditional_expect(
          {{s, x.times[0]}, x.direction, [phi](std::span<const double> v) { return phi(v.subspan(1, 1)); }, x.growth},
          1, gamma, cfg);
    }
    std::size_t ks = 0;
    for (std::size_t i = 0; i < x.arity(); ++i) {
      if (std::abs(x.times[i] - s) <= 1e-12 * std::max(1.0, s)) ks = i + 1;
    }
    return conditional_expect(x, ks, gamma, cfg);
  }();

  SubmartingaleReport rep;
  double hi = 0.0;
  rep.min_margin = interior_min(
      lhs, interior_fraction, [&](std::size_t i, const auto&) { return lhs.node_value(i) - hf(rhs.node_value(i)); },
      &hi);
  rep.max_abs_margin = std::max(std::abs(rep.min_margin), std::abs(hi));
  return rep;
}

}  // namespace gcalc
