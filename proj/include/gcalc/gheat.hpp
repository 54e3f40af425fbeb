#pragma once

// Explicit monotone finite-difference solver for the G-heat equation
//
//   du/dt = 1/2 [ sigma_plus (u_xx)^+ + sigma_minus (u_xx)^- ],   u(0, .) = payoff
//
// with (u_xx)^- = max(-u_xx, 0) and sigma_minus <= 0. Every update is a convex
// combination of neighbouring values, so the discrete comparison principle holds.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcalc/sublinear.hpp"
#include "json.hpp"

namespace gcalc {

using Payoff1D = std::function<double(double)>;
using Payoff2D = std::function<double(double, double)>;

/// Uniform nodes on [-radius, radius].
class Grid1D {
 public:
  Grid1D(double radius, std::size_t n_points);

  double radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return n_points_; }
  double dx() const noexcept { return dx_; }
  double node(std::size_t i) const noexcept { return -radius_ + static_cast<double>(i) * dx_; }

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.radius_ == b.radius_ && a.n_points_ == b.n_points_;
  }

 private:
  double radius_;
  std::size_t n_points_;
  double dx_;
};

/// A sampled u(t, .) on a Grid1D.
struct GridFunction {
  GridFunction(Grid1D g, std::vector<double> v, double t = 0.0);

  Grid1D grid;
  std::vector<double> values;
  double time_stamp = 0.0;

  /// Piecewise-linear interpolation; outside the grid the end segments are extended.
  double at(double x) const;
  /// max_i |u_{i+1} - u_i| / dx
  double lipschitz_constant() const;
};

/// Samples payoff on every node; throws NonFiniteError on NaN/inf.
GridFunction sample(const Grid1D& grid, const Payoff1D& payoff);

enum class BoundaryPolicy {
  linear_extrapolation,  ///< ghost node on the secant line: u_xx = 0 at the end nodes
  clamp,                 ///< ghost node copies the end node: zero slope
};

std::string to_string(BoundaryPolicy p);
BoundaryPolicy boundary_policy_from_string(const std::string& s);

struct SolverConfig {
  double cfl_factor = 0.5;  ///< dt = cfl_factor * dx^2 / sigma_max, in (0, 0.5]
  BoundaryPolicy boundary = BoundaryPolicy::linear_extrapolation;
  double radius_multiplier = 8.0;  ///< domain half-width per unit sqrt(sigma_max * T), >= 4
  std::size_t n_points = 2001;     ///< nodes per axis

  /// Throws CflError / DomainError for inadmissible settings.
  void validate() const;

  nlohmann::json to_json() const;
  static SolverConfig from_json(const nlohmann::json& j);
};

struct SolveDiagnostics {
  double dt = 0.0;
  std::size_t steps = 0;
  double radius = 0.0;
  double dx = 0.0;

  nlohmann::json to_json() const;
};

struct Solution1D {
  GridFunction u;
  SolveDiagnostics diagnostics;
};

/// Radius rule: multiplier * sqrt(sigma_max * T) * (1 + |x_eval|), widened so that
/// x_eval always keeps a full multiplier * sqrt(sigma_max * T) margin.
double domain_radius(const SolverConfig& cfg, double sigma_max, double horizon, double x_eval);

/// Number of explicit steps needed to reach horizon with dt <= cfl * dx^2 / sigma_max.
std::size_t step_count(const SolverConfig& cfg, double sigma_max, double dx, double horizon);

/// Advances u in place by `steps` explicit steps of size horizon/steps.
void advance(GridFunction& u, double sigma_plus, double sigma_minus, double horizon,
             std::size_t steps, BoundaryPolicy boundary);

/// Advances an existing grid function to time u.time_stamp + horizon under cfg's CFL rule.
Solution1D solve_on_grid(double sigma_plus, double sigma_minus, GridFunction initial,
                         double horizon, const SolverConfig& cfg);

/// u(horizon, .) for the given payoff, on a grid sized by the radius rule around x_eval.
Solution1D solve_gheat_1d(double sigma_plus, double sigma_minus, const Payoff1D& payoff,
                          double horizon, const SolverConfig& cfg, double x_eval = 0.0);

/// P_t^G(phi((a, .)))(x) via the rank-one reduction. x has the dimension of gamma.
double evaluate_pt(const UncertaintySet& gamma, const Direction& a, const Payoff1D& payoff,
                   double t, std::span<const double> x, const SolverConfig& cfg = {});

/// One-dimensional convenience: x in R (requires gamma.dim() == 1 and a.dim() == 1).
double evaluate_pt(const UncertaintySet& gamma, const Direction& a, const Payoff1D& payoff,
                   double t, double x, const SolverConfig& cfg = {});

/// Tensor grid function for the two-dimensional diagonal solver, values[ix * ny + iy].
struct GridFunction2D {
  Grid1D grid_x;
  Grid1D grid_y;
  std::vector<double> values;
  double time_stamp = 0.0;

  double node_value(std::size_t ix, std::size_t iy) const { return values[ix * grid_y.size() + iy]; }
  /// Bilinear interpolation.
  double at(double x, double y) const;
  /// The y-slice at node iy, as a 1D grid function over x.
  GridFunction slice_x(std::size_t iy) const;
};

struct Solution2D {
  GridFunction2D u;
  SolveDiagnostics diagnostics;
};

/// du/dt = 1/2 sum_i [hi_i^2 (d_ii u)^+ - lo_i^2 (d_ii u)^-] for a two-axis diagonal box.
Solution2D solve_gheat_diag(const UncertaintySet& box, const Payoff2D& payoff, double horizon,
                            const SolverConfig& cfg);

/// Same scheme on caller-supplied grids with a fixed step count (used for slice comparisons).
Solution2D solve_gheat_diag_on_grid(const UncertaintySet& box, GridFunction2D initial,
                                    double horizon, std::size_t steps, BoundaryPolicy boundary);

/// (P_t(P_s phi), P_{t+s} phi) on one shared grid covering |x| <= x_extent.
std::pair<GridFunction, GridFunction> semigroup_compose(const UncertaintySet& gamma,
                                                        const Direction& a,
                                                        const Payoff1D& payoff, double s,
                                                        double t, const SolverConfig& cfg = {},
                                                        double x_extent = 2.0);

/// CSV with header "x,u", 17 significant digits.
std::string to_csv(const GridFunction& u);
nlohmann::json to_json(const GridFunction& u);

}  // namespace gcalc
