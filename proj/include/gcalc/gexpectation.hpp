#pragma once

// G-expectation of cylinder functionals X = phi((a, B_{t1}), ..., (a, B_{tm})), m <= 3,
// by backward recursion over the increments: each step replaces the last argument
// with a one-dimensional G-heat solve over B_{t_j} - B_{t_{j-1}}.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gcalc/ensemble.hpp"
#include "gcalc/gheat.hpp"
#include "gcalc/sublinear.hpp"
#include "gcalc/templates.hpp"
#include "json.hpp"

namespace gcalc {

enum class GrowthTag { bounded_lipschitz, polynomial };

struct CylinderFunctional {
  std::vector<double> times;  ///< 0 < t_1 < ... < t_m, m <= 3
  Direction direction{std::vector<double>{1.0}};
  CylinderPayoff phi;
  GrowthTag growth = GrowthTag::polynomial;

  std::size_t arity() const noexcept { return times.size(); }
  /// Throws DomainError (times, empty phi) or DimensionError (m outside 1..3).
  void validate() const;
};

struct ExpectationConfig {
  SolverConfig solver;               ///< used for the final scalar solve
  std::size_t prefix_points = 201;   ///< nodes per prefix coordinate
  std::size_t inner_points = 401;    ///< nodes of each nested increment solve (made odd)
};

/// E[X | H_{t_k}] sampled on a tensor grid over the first k coordinates (k <= 2).
class ConditionalValue {
 public:
  ConditionalValue(std::vector<double> times, Direction direction, std::vector<Grid1D> grids,
                   std::vector<double> values);

  double at_time() const noexcept { return times_.back(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const Direction& direction() const noexcept { return direction_; }
  std::size_t dims() const noexcept { return grids_.size(); }
  const Grid1D& grid(std::size_t i) const { return grids_.at(i); }

  std::size_t node_count() const noexcept { return values_.size(); }
  /// Prefix coordinates of flat node `idx` (row-major, last coordinate fastest).
  std::vector<double> node(std::size_t idx) const;
  double node_value(std::size_t idx) const { return values_.at(idx); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Multilinear interpolation; outside the grid the boundary cells are extended.
  double operator()(std::span<const double> prefix) const;

  /// The value as a cylinder functional on times()[0..k).
  CylinderFunctional as_functional() const;

 private:
  std::vector<double> times_;
  Direction direction_;
  std::vector<Grid1D> grids_;
  std::vector<double> values_;
};

double expect(const CylinderFunctional& x, const UncertaintySet& gamma,
              const ExpectationConfig& cfg = {});

/// 1 <= k < m. Throws DomainError otherwise.
ConditionalValue conditional_expect(const CylinderFunctional& x, std::size_t k,
                                    const UncertaintySet& gamma, const ExpectationConfig& cfg = {});

// ---------------------------------------------------------------------------
// L_G^p machinery on scenario ensembles

/// (sup_s mean_s |X|^p)^{1/p}. Throws DomainError for p < 1 or an empty ensemble.
double lp_norm(const Ensemble& samples, double p);

struct InequalityReport {
  std::map<std::string, double> worst;  ///< lhs - rhs, maximised over the battery
  std::map<std::string, std::string> worst_case;
  double max_violation() const;
  nlohmann::json to_json() const;
};

struct NamedPairedEnsemble {
  std::string name;
  PairedEnsemble ensemble;
};

/// C_r (for r in {0.5, 1, 2, p}), Hoelder, Minkowski and norm monotonicity on each
/// battery entry. Throws DomainError unless p, q > 1 and 1/p + 1/q = 1.
InequalityReport verify_appendix_inequalities(const std::vector<NamedPairedEnsemble>& battery,
                                              double p, double q);

// ---------------------------------------------------------------------------
// Axiom battery

struct AxiomCase {
  std::string name;
  std::vector<double> times;
  CylinderPayoff x;
  CylinderPayoff y;
  CylinderPayoff eta;          ///< function of the first k coordinates; empty means none
  std::size_t k = 1;           ///< conditioning index, 1 <= k < m
  bool x_dominates_y = false;  ///< caller asserts X >= Y pointwise
  bool y_zero_mean = false;    ///< caller asserts E[Y|H] = E[-Y|H] = 0
  double lambda = 2.0;
  double constant = 1.5;
};

struct StationarityCase {
  std::string name;
  std::function<double(double)> psi;
  double s = 0.5;
  double t = 1.0;
};

struct AxiomBattery {
  Direction direction{std::vector<double>{1.0}};
  std::vector<AxiomCase> cases;
  std::vector<StationarityCase> stationarity;
  double eta_bound = 10.0;          ///< eta is clamped to [-eta_bound, eta_bound]
  double interior_fraction = 0.5;   ///< pointwise checks use |x_i| <= fraction * radius_i
  double tolerance = 5e-3;

  /// Battery file: {"direction", "eta_bound", "tolerance", "cases": [...], "stationarity": [...]}
  /// with payoffs written as templates. Throws ConfigError.
  static AxiomBattery from_json(const nlohmann::json& j);
};

/// Built-in battery over the one-dimensional reference examples.
AxiomBattery default_axiom_battery();

/// Worst violation per axiom (0 is perfect); keys are stable identifiers.
InequalityReport verify_expectation_axioms(const UncertaintySet& gamma, const AxiomBattery& battery,
                                           const ExpectationConfig& cfg = {});

}  // namespace gcalc
