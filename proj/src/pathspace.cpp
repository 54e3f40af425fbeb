#include "gcalc/pathspace.hpp"

#include <algorithm>
#include <array>
#include <variant>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gcalc/errors.hpp"
#include "gcalc/rng.hpp"

namespace gcalc {

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw DomainError("a partition needs at least two points");
  if (points_.front() != 0.0) throw DomainError("a partition must start at 0");
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    const double d = points_[k + 1] - points_[k];
    if (!std::isfinite(points_[k + 1]) || !(d > 0.0)) {
      throw DomainError("partition points must be finite and strictly increasing");
    }
    mesh_ = std::max(mesh_, d);
  }
}

Partition Partition::uniform(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || steps == 0) throw DomainError("uniform partition needs horizon > 0 and steps >= 1");
  std::vector<double> pts(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    pts[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
  }
  pts.back() = horizon;
  return Partition(std::move(pts));
}

std::size_t Partition::index_of(double t) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(horizon()));
  auto it = std::lower_bound(points_.begin(), points_.end(), t - tol);
  if (it == points_.end() || std::abs(*it - t) > tol) {
    throw PartitionError("time " + std::to_string(t) + " is not a partition point");
  }
  return static_cast<std::size_t>(it - points_.begin());
}

bool Partition::refines(const Partition& coarse) const {
  try {
    for (double t : coarse.points_) index_of(t);
  } catch (const PartitionError&) {
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Controls

void ScenarioControl::validate(const UncertaintySet& gamma) const {
  if (matrices.size() != partition.steps()) {
    throw DimensionError("control needs one volatility matrix per subinterval");
  }
  for (const auto& m : matrices) {
    if (m.dim() != gamma.dim()) throw DimensionError("control matrix dimension differs from gamma");
    if (!gamma.contains(m, 1e-9)) throw DomainError("control '" + label + "' leaves the uncertainty set");
  }
}

nlohmann::json ScenarioControl::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["steps"] = partition.steps();
  j["horizon"] = partition.horizon();
  // constant controls are summarised by their single matrix
  bool constant = std::all_of(matrices.begin(), matrices.end(), [&](const VolMatrix& m) {
    return std::equal(m.data().begin(), m.data().end(), matrices.front().data().begin());
  });
  if (constant) {
    j["matrix"] = std::vector<double>(matrices.front().data().begin(), matrices.front().data().end());
  } else {
    j["matrix"] = "piecewise";
  }
  return j;
}

ScenarioControl ScenarioControl::constant(const Partition& p, const VolMatrix& g, std::string label) {
  return ScenarioControl{p, std::vector<VolMatrix>(p.steps(), g), std::move(label)};
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// volatility matrices at fraction f of the way from the lower to the upper corner
VolMatrix corner_blend(const UncertaintySet& gamma, double f) {
  if (const auto* iv = std::get_if<Interval1D>(&gamma.kind())) {
    return VolMatrix::scalar(iv->sigma_low + f * (iv->sigma_high - iv->sigma_low));
  }
  const auto& box = std::get<DiagonalBox>(gamma.kind());
  std::vector<double> diag;
  for (const auto& ax : box.axes) diag.push_back(ax.lo + f * (ax.hi - ax.lo));
  return VolMatrix::diagonal(diag);
}

}  // namespace

std::vector<ScenarioControl> volatility_ladder(const UncertaintySet& gamma, const Partition& p,
                                               std::size_t levels) {
  if (levels == 0) throw DomainError("volatility ladder needs at least one level");
  std::vector<ScenarioControl> out;
  if (const auto* ms = std::get_if<MatrixSet>(&gamma.kind())) {
    for (std::size_t i = 0; i < ms->matrices.size(); ++i) {
      out.push_back(ScenarioControl::constant(p, ms->matrices[i], "member[" + std::to_string(i) + "]"));
    }
    return out;
  }
  for (std::size_t l = 0; l < levels; ++l) {
    const double f = levels == 1 ? 1.0 : static_cast<double>(l) / static_cast<double>(levels - 1);
    const VolMatrix g = corner_blend(gamma, f);
    std::string label = "const(";
    for (std::size_t i = 0; i < g.dim(); ++i) label += (i ? "," : "") + fmt(g(i, i));
    out.push_back(ScenarioControl::constant(p, g, label + ")"));
  }
  return out;
}

ScenarioControl bang_bang_control(const UncertaintySet& gamma, const Partition& p, const Direction& a,
                                  const std::function<double(double)>& proxy) {
  if (a.dim() != gamma.dim()) throw DimensionError("direction dimension differs from gamma");
  std::vector<VolMatrix> candidates;
  if (const auto* ms = std::get_if<MatrixSet>(&gamma.kind())) {
    candidates = ms->matrices;
  } else {
    // variance along a is monotone in each axis volatility: the corners suffice
    candidates = {corner_blend(gamma, 0.0), corner_blend(gamma, 1.0)};
  }
  const SymMatrix aat = SymMatrix::outer(a);
  std::size_t best_hi = 0, best_lo = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = candidates[i].trace_quadratic(aat);
    if (v > candidates[best_hi].trace_quadratic(aat)) best_hi = i;
    if (v < candidates[best_lo].trace_quadratic(aat)) best_lo = i;
  }
  std::vector<VolMatrix> mats;
  mats.reserve(p.steps());
  for (std::size_t k = 0; k < p.steps(); ++k) {
    mats.push_back(proxy(p.points()[k]) >= 0.0 ? candidates[best_hi] : candidates[best_lo]);
  }
  return ScenarioControl{p, std::move(mats), "bang_bang"};
}

// ---------------------------------------------------------------------------
// Paths

SamplePath::SamplePath(Partition partition, std::size_t dim, std::vector<double> increments,
                       std::uint64_t seed, std::uint64_t path_index)
    : partition_(std::move(partition)),
      dim_(dim),
      increments_(std::move(increments)),
      seed_(seed),
      path_index_(path_index) {
  if (dim_ == 0) throw DimensionError("path dimension must be positive");
  if (increments_.size() != partition_.steps() * dim_) {
    throw DimensionError("increment array does not match partition and dimension");
  }
  for (double v : increments_) {
    if (!std::isfinite(v)) throw NonFiniteError("path increment is not finite");
  }
  rebuild_cumulative();
}

void SamplePath::rebuild_cumulative() {
  cumulative_.assign((partition_.steps() + 1) * dim_, 0.0);
  for (std::size_t k = 0; k < partition_.steps(); ++k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      cumulative_[(k + 1) * dim_ + i] = cumulative_[k * dim_ + i] + increments_[k * dim_ + i];
    }
  }
}

double SamplePath::increment_along(std::size_t k, const Direction& a) const {
  return a.dot(increment(k));
}

std::vector<double> SamplePath::positions(const Direction& a) const {
  if (a.dim() != dim_) throw DimensionError("direction dimension differs from path dimension");
  std::vector<double> out(steps() + 1, 0.0);
  for (std::size_t k = 0; k < steps(); ++k) out[k + 1] = out[k] + increment_along(k, a);
  return out;
}

std::vector<double> SamplePath::terminal() const {
  const auto b = position(steps());
  return {b.begin(), b.end()};
}

std::string SamplePath::to_csv() const {
  std::string out = "t";
  for (std::size_t i = 0; i < dim_; ++i) out += ",B" + std::to_string(i + 1);
  out += "\n";
  char buf[40];
  for (std::size_t k = 0; k <= steps(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", partition_.points()[k]);
    out += buf;
    for (double v : position(k)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void regenerate_path(const ScenarioControl& control, std::uint64_t seed, std::uint64_t path_index,
                     SamplePath& out) {
  const std::size_t d = control.dim();
  const std::size_t n = control.partition.steps();
  if (control.matrices.size() != n) throw DimensionError("control needs one matrix per subinterval");
  if (!(out.partition_ == control.partition) || out.dim_ != d) {
    out.partition_ = control.partition;
    out.dim_ = d;
    out.increments_.assign(n * d, 0.0);
  }
  out.seed_ = seed;
  out.path_index_ = path_index;
  const auto& pts = control.partition.points();
  double* inc = out.increments_.data();

  if (d == 1) {
    std::size_t k = 0;
    for (std::uint64_t block = 0; k < n; ++block) {
      const auto z = philox_normals(seed, block, path_index);
      for (int lane = 0; lane < 4 && k < n; ++lane, ++k) {
        inc[k] = control.matrices[k](0, 0) * std::sqrt(pts[k + 1] - pts[k]) * z[lane];
      }
    }
  } else {
    std::vector<double> zk(d), yk(d);
    std::array<double, 4> z{};
    std::uint64_t block = 0;
    int lane = 4;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        if (lane == 4) {
          z = philox_normals(seed, block++, path_index);
          lane = 0;
        }
        zk[i] = z[lane++];
      }
      control.matrices[k].apply(zk, yk);
      const double sq = std::sqrt(pts[k + 1] - pts[k]);
      for (std::size_t i = 0; i < d; ++i) inc[k * d + i] = yk[i] * sq;
    }
  }
  out.rebuild_cumulative();
}

SamplePath generate_path(const ScenarioControl& control, std::uint64_t seed, std::uint64_t path_index) {
  SamplePath path(control.partition, control.dim(),
                  std::vector<double>(control.partition.steps() * control.dim(), 0.0), seed, path_index);
  regenerate_path(control, seed, path_index, path);
  return path;
}

std::span<const double> PathPrefix::increment(std::size_t j) const {
  if (j >= k_) throw PartitionError("simple process read an increment from its future");
  return path_.increment(j);
}

double PathPrefix::position(const Direction& a) const { return a.dot(path_.position(k_)); }

// ---------------------------------------------------------------------------
// Simple processes and integrals

SimpleProcess SimpleProcess::constant(const Partition& p, double c) {
  return {p, [c](std::size_t, const PathPrefix&) { return c; }};
}

SimpleProcess SimpleProcess::position(const Partition& p, const Direction& a) {
  return {p, [a](std::size_t, const PathPrefix& prefix) { return prefix.position(a); }};
}

SimpleProcess SimpleProcess::deterministic(const Partition& p, std::function<double(double)> f) {
  return {p, [f = std::move(f)](std::size_t, const PathPrefix& prefix) { return f(prefix.time()); }};
}

std::vector<double> step_values(const SimpleProcess& eta, const SamplePath& path) {
  const auto& ep = eta.partition.points();
  const auto& pp = path.partition();
  const double tol = 1e-12 * std::max(1.0, pp.horizon());
  if (std::abs(ep.back() - pp.horizon()) > tol) throw PartitionError("process and path horizons differ");
  if (!eta.value) throw PartitionError("simple process has no value function");
  std::vector<double> out(path.steps());
  std::size_t k = 0;
  for (std::size_t j = 0; j + 1 < ep.size(); ++j) {
    const std::size_t start = pp.index_of(ep[j]);
    const std::size_t stop = pp.index_of(ep[j + 1]);
    const double xi = eta.value(j, PathPrefix(path, start));
    if (!std::isfinite(xi)) throw NonFiniteError("simple process value is not finite");
    for (k = start; k < stop; ++k) out[k] = xi;
  }
  return out;
}

double ito_integral(const SimpleProcess& eta, const SamplePath& path, const Direction& a) {
  const auto xi = step_values(eta, path);
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * path.increment_along(k, a);
  return s;
}

double bochner_integral(const SimpleProcess& eta, const SamplePath& path) {
  const auto xi = step_values(eta, path);
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * path.partition().dt(k);
  return s;
}

std::vector<double> quadratic_variation(const SamplePath& path, const Direction& a) {
  if (a.dim() != path.dim()) throw DimensionError("direction dimension differs from path dimension");
  std::vector<double> out(path.steps() + 1, 0.0);
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const double db = path.increment_along(k, a);
    out[k + 1] = out[k] + db * db;
  }
  return out;
}

namespace {

Direction combine(const Direction& a, const Direction& b, double sign) {
  if (a.dim() != b.dim()) throw DimensionError("directions have different dimensions");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] + sign * b[i];
  return Direction(std::move(c));
}

}  // namespace

std::vector<double> mutual_variation(const SamplePath& path, const Direction& a, const Direction& abar) {
  const auto plus = quadratic_variation(path, combine(a, abar, 1.0));
  const auto minus = quadratic_variation(path, combine(a, abar, -1.0));
  std::vector<double> out(plus.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.25 * (plus[k] - minus[k]);
  return out;
}

double integral_wrt_qv(const SimpleProcess& eta, const SamplePath& path, const Direction& a) {
  const auto xi = step_values(eta, path);
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double db = path.increment_along(k, a);
    s += xi[k] * db * db;
  }
  return s;
}

double integral_wrt_mutual(const SimpleProcess& eta, const SamplePath& path, const Direction& a,
                           const Direction& abar) {
  const auto xi = step_values(eta, path);
  const Direction p = combine(a, abar, 1.0), m = combine(a, abar, -1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double u = path.increment_along(k, p), v = path.increment_along(k, m);
    s += xi[k] * 0.25 * (u * u - v * v);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Ensembles

ScenarioSamples simulate(const PathFunctional& x, const ScenarioControl& control, std::size_t n_paths,
                         std::uint64_t seed) {
  if (n_paths == 0) throw DomainError("at least one path is required");
  ScenarioSamples out{control.label, std::vector<double>(n_paths)};
  SamplePath path = generate_path(control, seed, 0);
  for (std::size_t p = 0; p < n_paths; ++p) {
    if (p > 0) regenerate_path(control, seed, p, path);
    const double v = x(path);
    if (!std::isfinite(v)) throw NonFiniteError("path functional is not finite");
    out.values[p] = v;
  }
  return out;
}

namespace {

void check_budget(const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                  const MonteCarloBudget& budget) {
  if (controls.empty()) throw DomainError("control family is empty");
  double work = 0.0;
  for (const auto& c : controls) {
    work += static_cast<double>(n_paths) * static_cast<double>(c.partition.steps()) * static_cast<double>(c.dim());
  }
  if (work > budget.max_normals) {
    throw BudgetError("Monte Carlo request needs " + std::to_string(work) + " normal draws, budget is " +
                      std::to_string(budget.max_normals));
  }
}

}  // namespace

Ensemble simulate_family(const PathFunctional& x, const std::vector<ScenarioControl>& controls,
                         std::size_t n_paths, std::uint64_t seed, const MonteCarloBudget& budget) {
  check_budget(controls, n_paths, budget);
  Ensemble out;
  for (const auto& c : controls) out.push_back(simulate(x, c, n_paths, seed));
  return out;
}

PairedEnsemble simulate_family_paired(const PathFunctional& x, const PathFunctional& y,
                                      const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                                      std::uint64_t seed, const MonteCarloBudget& budget) {
  check_budget(controls, n_paths, budget);
  if (n_paths == 0) throw DomainError("at least one path is required");
  PairedEnsemble out;
  for (const auto& c : controls) {
    PairedScenarioSamples s{c.label, std::vector<double>(n_paths), std::vector<double>(n_paths)};
    SamplePath path = generate_path(c, seed, 0);
    for (std::size_t p = 0; p < n_paths; ++p) {
      if (p > 0) regenerate_path(c, seed, p, path);
      s.x[p] = x(path);
      s.y[p] = y(path);
      if (!std::isfinite(s.x[p]) || !std::isfinite(s.y[p])) throw NonFiniteError("path functional is not finite");
    }
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json ScenarioSupResult::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["standard_error"] = standard_error;
  j["argmax"] = argmax;
  j["argmax_label"] = argmax_label;
  auto& per = j["controls"] = nlohmann::json::array();
  for (std::size_t i = 0; i < per_control.size(); ++i) {
    per.push_back({{"label", labels[i]},
                   {"mean", per_control[i].mean},
                   {"standard_error", per_control[i].standard_error},
                   {"paths", per_control[i].count}});
  }
  return j;
}

ScenarioSupResult scenario_sup_expect(const PathFunctional& x, const UncertaintySet& gamma,
                                      const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                                      std::uint64_t seed, const MonteCarloBudget& budget) {
  for (const auto& c : controls) c.validate(gamma);
  const auto ens = simulate_family(x, controls, n_paths, seed, budget);
  const auto est = sup_mean(ens);
  ScenarioSupResult r;
  r.value = est.value;
  r.argmax = est.argmax;
  r.standard_error = est.standard_error;
  r.argmax_label = controls[est.argmax].label;
  for (const auto& c : controls) r.labels.push_back(c.label);
  r.per_control = est.per_scenario;
  return r;
}

}  // namespace gcalc
