#include "gcalc/gheat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gcalc/errors.hpp"

namespace gcalc {

namespace {

// Second difference at node i (without the 1/dx^2 factor), honoring the boundary policy.
inline double second_difference(const double* u, std::size_t n, std::size_t i, std::size_t stride,
                                BoundaryPolicy boundary) {
  if (i == 0) {
    return boundary == BoundaryPolicy::clamp ? u[stride] - u[0] : 0.0;
  }
  if (i == n - 1) {
    return boundary == BoundaryPolicy::clamp ? u[(n - 2) * stride] - u[(n - 1) * stride] : 0.0;
  }
  return u[(i + 1) * stride] - 2.0 * u[i * stride] + u[(i - 1) * stride];
}

inline double hamiltonian(double d2, double lambda_plus, double lambda_minus) {
  return d2 > 0.0 ? lambda_plus * d2 : lambda_minus * d2;
}

void require_sigmas(double sigma_plus, double sigma_minus) {
  if (!(sigma_plus >= 0.0) || !(sigma_minus <= 0.0) || !std::isfinite(sigma_plus) ||
      !std::isfinite(sigma_minus)) {
    throw DomainError("solver requires sigma_plus >= 0 >= sigma_minus");
  }
}

void require_horizon(double horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and >= 0");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid1D / GridFunction

Grid1D::Grid1D(double radius, std::size_t n_points) : radius_(radius), n_points_(n_points) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("grid radius must be positive");
  if (n_points < 3) throw DomainError("grid needs at least 3 points");
  dx_ = 2.0 * radius / static_cast<double>(n_points - 1);
}

GridFunction::GridFunction(Grid1D g, std::vector<double> v, double t)
    : grid(g), values(std::move(v)), time_stamp(t) {
  if (values.size() != grid.size()) throw DimensionError("grid function length does not match grid");
}

double GridFunction::at(double x) const {
  const double pos = (x + grid.radius()) / grid.dx();
  const auto last = static_cast<double>(grid.size() - 1);
  std::size_t i;
  if (pos <= 0.0) {
    i = 0;
  } else if (pos >= last) {
    i = grid.size() - 2;
  } else {
    i = std::min(static_cast<std::size_t>(pos), grid.size() - 2);
  }
  const double w = pos - static_cast<double>(i);
  if (w == 0.0) return values[i];
  if (w == 1.0) return values[i + 1];
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double GridFunction::lipschitz_constant() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) m = std::max(m, std::abs(values[i + 1] - values[i]));
  return m / grid.dx();
}

GridFunction sample(const Grid1D& grid, const Payoff1D& payoff) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = payoff(grid.node(i));
    if (!std::isfinite(v[i])) {
      throw NonFiniteError("payoff is not finite at x = " + fmt17(grid.node(i)));
    }
  }
  return GridFunction(grid, std::move(v), 0.0);
}

// ---------------------------------------------------------------------------
// Configuration

std::string to_string(BoundaryPolicy p) {
  return p == BoundaryPolicy::clamp ? "clamp" : "linear_extrapolation";
}

BoundaryPolicy boundary_policy_from_string(const std::string& s) {
  if (s == "linear_extrapolation") return BoundaryPolicy::linear_extrapolation;
  if (s == "clamp") return BoundaryPolicy::clamp;
  throw ConfigError("pde.boundary_policy", "unknown boundary policy '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(cfl_factor > 0.0) || cfl_factor > 0.5) {
    throw CflError("cfl_factor must lie in (0, 0.5] for monotone explicit stepping, got " +
                   fmt17(cfl_factor));
  }
  if (!(radius_multiplier >= 4.0) || !std::isfinite(radius_multiplier)) {
    throw DomainError("radius_multiplier must be >= 4");
  }
  if (n_points < 3) throw DomainError("n_points must be >= 3");
}

nlohmann::json SolverConfig::to_json() const {
  return {{"cfl_factor", cfl_factor},
          {"boundary_policy", to_string(boundary)},
          {"radius_multiplier", radius_multiplier},
          {"grid_points", n_points}};
}

SolverConfig SolverConfig::from_json(const nlohmann::json& j) {
  SolverConfig c;
  try {
    if (j.contains("cfl_factor")) c.cfl_factor = j.at("cfl_factor").get<double>();
    if (j.contains("boundary_policy")) c.boundary = boundary_policy_from_string(j.at("boundary_policy").get<std::string>());
    if (j.contains("radius_multiplier")) c.radius_multiplier = j.at("radius_multiplier").get<double>();
    if (j.contains("grid_points")) c.n_points = j.at("grid_points").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("pde", e.what());
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError("pde", e.what());
  }
  return c;
}

nlohmann::json SolveDiagnostics::to_json() const {
  return {{"dt", dt}, {"steps", steps}, {"radius", radius}, {"dx", dx}};
}

// ---------------------------------------------------------------------------
// Stepping

double domain_radius(const SolverConfig& cfg, double sigma_max, double horizon, double x_eval) {
  const double base = cfg.radius_multiplier * std::sqrt(std::max(sigma_max, 0.0) * horizon);
  const double ax = std::abs(x_eval);
  if (base == 0.0) return 1.0 + ax;
  return std::max(base * (1.0 + ax), ax + base);
}

std::size_t step_count(const SolverConfig& cfg, double sigma_max, double dx, double horizon) {
  if (horizon == 0.0 || sigma_max == 0.0) return 0;
  const double dt_max = cfg.cfl_factor * dx * dx / sigma_max;
  const double ratio = horizon / dt_max;
  auto steps = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
  return std::max<std::size_t>(steps, 1);
}

void advance(GridFunction& u, double sigma_plus, double sigma_minus, double horizon,
             std::size_t steps, BoundaryPolicy boundary) {
  require_sigmas(sigma_plus, sigma_minus);
  require_horizon(horizon);
  if (steps == 0) {
    u.time_stamp += horizon;
    return;
  }
  const double dt = horizon / static_cast<double>(steps);
  const double dx2 = u.grid.dx() * u.grid.dx();
  const double lambda_plus = 0.5 * sigma_plus * dt / dx2;
  const double lambda_minus = 0.5 * (-sigma_minus) * dt / dx2;
  if (2.0 * std::max(lambda_plus, lambda_minus) > 1.0 + 1e-12) {
    throw CflError("step size violates the monotonicity bound");
  }
  const std::size_t n = u.values.size();
  std::vector<double> next(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double* cur = u.values.data();
    double* out = next.data();
    out[0] = cur[0] + hamiltonian(second_difference(cur, n, 0, 1, boundary), lambda_plus, lambda_minus);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double d2 = cur[i + 1] - 2.0 * cur[i] + cur[i - 1];
      out[i] = cur[i] + (d2 > 0.0 ? lambda_plus * d2 : lambda_minus * d2);
    }
    out[n - 1] = cur[n - 1] + hamiltonian(second_difference(cur, n, n - 1, 1, boundary), lambda_plus, lambda_minus);
    u.values.swap(next);
  }
  u.time_stamp += horizon;
}

Solution1D solve_on_grid(double sigma_plus, double sigma_minus, GridFunction initial,
                         double horizon, const SolverConfig& cfg) {
  cfg.validate();
  require_sigmas(sigma_plus, sigma_minus);
  require_horizon(horizon);
  for (double v : initial.values) {
    if (!std::isfinite(v)) throw NonFiniteError("initial values must be finite");
  }
  const double sigma_max = std::max(sigma_plus, -sigma_minus);
  const std::size_t steps = step_count(cfg, sigma_max, initial.grid.dx(), horizon);
  SolveDiagnostics d;
  d.steps = steps;
  d.dt = steps == 0 ? 0.0 : horizon / static_cast<double>(steps);
  d.radius = initial.grid.radius();
  d.dx = initial.grid.dx();
  advance(initial, sigma_plus, sigma_minus, horizon, steps, cfg.boundary);
  return {std::move(initial), d};
}

Solution1D solve_gheat_1d(double sigma_plus, double sigma_minus, const Payoff1D& payoff,
                          double horizon, const SolverConfig& cfg, double x_eval) {
  cfg.validate();
  require_sigmas(sigma_plus, sigma_minus);
  require_horizon(horizon);
  const double sigma_max = std::max(sigma_plus, -sigma_minus);
  const Grid1D grid(domain_radius(cfg, sigma_max, horizon, x_eval), cfg.n_points);
  return solve_on_grid(sigma_plus, sigma_minus, sample(grid, payoff), horizon, cfg);
}

double evaluate_pt(const UncertaintySet& gamma, const Direction& a, const Payoff1D& payoff,
                   double t, std::span<const double> x, const SolverConfig& cfg) {
  if (x.size() != gamma.dim()) throw DimensionError("evaluation point dimension mismatch");
  require_horizon(t);
  const double xbar = a.dot(x);
  const auto var = directional_variance(gamma, a);
  if (t == 0.0 || (var.plus == 0.0 && var.minus == 0.0)) {
    const double v = payoff(xbar);
    if (!std::isfinite(v)) throw NonFiniteError("payoff is not finite at the evaluation point");
    return v;
  }
  const auto sol = solve_gheat_1d(var.plus, var.minus, payoff, t, cfg, xbar);
  return sol.u.at(xbar);
}

double evaluate_pt(const UncertaintySet& gamma, const Direction& a, const Payoff1D& payoff,
                   double t, double x, const SolverConfig& cfg) {
  const double pt[1] = {x};
  return evaluate_pt(gamma, a, payoff, t, std::span<const double>(pt, 1), cfg);
}

// ---------------------------------------------------------------------------
// Two-dimensional diagonal solver

double GridFunction2D::at(double x, double y) const {
  auto locate = [](const Grid1D& g, double v, std::size_t& i, double& w) {
    const double pos = std::clamp((v + g.radius()) / g.dx(), 0.0, static_cast<double>(g.size() - 1));
    i = std::min(static_cast<std::size_t>(pos), g.size() - 2);
    w = pos - static_cast<double>(i);
  };
  std::size_t ix, iy;
  double wx, wy;
  locate(grid_x, x, ix, wx);
  locate(grid_y, y, iy, wy);
  return (1 - wx) * (1 - wy) * node_value(ix, iy) + wx * (1 - wy) * node_value(ix + 1, iy) +
         (1 - wx) * wy * node_value(ix, iy + 1) + wx * wy * node_value(ix + 1, iy + 1);
}

GridFunction GridFunction2D::slice_x(std::size_t iy) const {
  std::vector<double> v(grid_x.size());
  for (std::size_t ix = 0; ix < grid_x.size(); ++ix) v[ix] = node_value(ix, iy);
  return GridFunction(grid_x, std::move(v), time_stamp);
}

namespace {

const DiagonalBox& require_box2(const UncertaintySet& box) {
  const auto* b = std::get_if<DiagonalBox>(&box.kind());
  if (b == nullptr) throw DomainError("diagonal solver requires a diagonal_box uncertainty set");
  if (b->axes.size() != 2) throw DimensionError("diagonal solver supports d = 2 only");
  return *b;
}

}  // namespace

Solution2D solve_gheat_diag_on_grid(const UncertaintySet& box, GridFunction2D u, double horizon,
                                    std::size_t steps, BoundaryPolicy boundary) {
  const auto& b = require_box2(box);
  require_horizon(horizon);
  const std::size_t nx = u.grid_x.size(), ny = u.grid_y.size();
  if (u.values.size() != nx * ny) throw DimensionError("2D grid function size mismatch");
  SolveDiagnostics d;
  d.steps = steps;
  d.radius = std::max(u.grid_x.radius(), u.grid_y.radius());
  d.dx = std::min(u.grid_x.dx(), u.grid_y.dx());
  if (steps == 0) {
    u.time_stamp += horizon;
    return {std::move(u), d};
  }
  const double dt = horizon / static_cast<double>(steps);
  d.dt = dt;
  const double dx2 = u.grid_x.dx() * u.grid_x.dx();
  const double dy2 = u.grid_y.dx() * u.grid_y.dx();
  const double lxp = 0.5 * b.axes[0].hi * b.axes[0].hi * dt / dx2;
  const double lxm = 0.5 * b.axes[0].lo * b.axes[0].lo * dt / dx2;
  const double lyp = 0.5 * b.axes[1].hi * b.axes[1].hi * dt / dy2;
  const double lym = 0.5 * b.axes[1].lo * b.axes[1].lo * dt / dy2;
  if (2.0 * (std::max(lxp, lxm) + std::max(lyp, lym)) > 1.0 + 1e-12) {
    throw CflError("2D step size violates the monotonicity bound");
  }
  std::vector<double> next(u.values.size());
  for (std::size_t s = 0; s < steps; ++s) {
    const double* cur = u.values.data();
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const std::size_t k = ix * ny + iy;
        const double dxx = second_difference(cur + iy, nx, ix, ny, boundary);
        const double dyy = second_difference(cur + ix * ny, ny, iy, 1, boundary);
        next[k] = cur[k] + hamiltonian(dxx, lxp, lxm) + hamiltonian(dyy, lyp, lym);
      }
    }
    u.values.swap(next);
  }
  u.time_stamp += horizon;
  return {std::move(u), d};
}

Solution2D solve_gheat_diag(const UncertaintySet& box, const Payoff2D& payoff, double horizon,
                            const SolverConfig& cfg) {
  cfg.validate();
  const auto& b = require_box2(box);
  require_horizon(horizon);
  const double sx = b.axes[0].hi * b.axes[0].hi;
  const double sy = b.axes[1].hi * b.axes[1].hi;
  const Grid1D gx(domain_radius(cfg, sx, horizon, 0.0), cfg.n_points);
  const Grid1D gy(domain_radius(cfg, sy, horizon, 0.0), cfg.n_points);
  GridFunction2D u{gx, gy, std::vector<double>(gx.size() * gy.size()), 0.0};
  for (std::size_t ix = 0; ix < gx.size(); ++ix) {
    for (std::size_t iy = 0; iy < gy.size(); ++iy) {
      const double v = payoff(gx.node(ix), gy.node(iy));
      if (!std::isfinite(v)) throw NonFiniteError("payoff is not finite on the tensor grid");
      u.values[ix * gy.size() + iy] = v;
    }
  }
  std::size_t steps = 0;
  const double rate = sx / (gx.dx() * gx.dx()) + sy / (gy.dx() * gy.dx());
  if (horizon > 0.0 && rate > 0.0) {
    const double dt_max = cfg.cfl_factor / rate;
    steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon / dt_max * (1.0 - 1e-12))));
  }
  return solve_gheat_diag_on_grid(box, std::move(u), horizon, steps, cfg.boundary);
}

// ---------------------------------------------------------------------------

std::pair<GridFunction, GridFunction> semigroup_compose(const UncertaintySet& gamma,
                                                        const Direction& a,
                                                        const Payoff1D& payoff, double s,
                                                        double t, const SolverConfig& cfg,
                                                        double x_extent) {
  cfg.validate();
  require_horizon(s);
  require_horizon(t);
  const auto var = directional_variance(gamma, a);
  const double sigma_max = std::max(var.plus, -var.minus);
  const Grid1D grid(domain_radius(cfg, sigma_max, s + t, x_extent), cfg.n_points);
  const GridFunction init = sample(grid, payoff);
  auto inner = solve_on_grid(var.plus, var.minus, init, s, cfg).u;
  auto composed = solve_on_grid(var.plus, var.minus, std::move(inner), t, cfg).u;
  auto direct = solve_on_grid(var.plus, var.minus, init, s + t, cfg).u;
  return {std::move(composed), std::move(direct)};
}

std::string to_csv(const GridFunction& u) {
  std::ostringstream os;
  os << "x,u\n";
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    os << fmt17(u.grid.node(i)) << ',' << fmt17(u.values[i]) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const GridFunction& u) {
  std::vector<double> xs(u.values.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = u.grid.node(i);
  return {{"time", u.time_stamp},
          {"radius", u.grid.radius()},
          {"n_points", u.grid.size()},
          {"x", xs},
          {"u", u.values}};
}

}  // namespace gcalc
