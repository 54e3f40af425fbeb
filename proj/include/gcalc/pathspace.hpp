#pragma once

// Scenario simulation of G-Brownian motion. A scenario control fixes a piecewise
// constant volatility gamma_k in Gamma; under it B is an ordinary Gaussian martingale
// and every linear expectation so obtained is dominated by the G-expectation. The
// max over a control family of Monte Carlo means is therefore a lower estimate.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcalc/ensemble.hpp"
#include "gcalc/sublinear.hpp"
#include "json.hpp"

namespace gcalc {

class Partition {
 public:
  /// Throws DomainError unless points start at 0 and strictly increase.
  explicit Partition(std::vector<double> points);
  static Partition uniform(double horizon, std::size_t steps);

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t steps() const noexcept { return points_.size() - 1; }
  double horizon() const noexcept { return points_.back(); }
  double dt(std::size_t k) const { return points_[k + 1] - points_[k]; }
  /// max_k (t_{k+1} - t_k)
  double mesh() const noexcept { return mesh_; }
  /// True when every point of `coarse` is (to 1e-12 relative) a point of this partition.
  bool refines(const Partition& coarse) const;
  /// Index of point t (throws PartitionError if absent).
  std::size_t index_of(double t) const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.points_ == b.points_; }

 private:
  std::vector<double> points_;
  double mesh_ = 0.0;
};

struct ScenarioControl {
  Partition partition;
  std::vector<VolMatrix> matrices;  ///< one per subinterval
  std::string label;

  std::size_t dim() const { return matrices.front().dim(); }
  /// Throws DimensionError / DomainError when sizes disagree or a matrix leaves gamma.
  void validate(const UncertaintySet& gamma) const;
  nlohmann::json to_json() const;

  static ScenarioControl constant(const Partition& p, const VolMatrix& g, std::string label = {});
};

/// Constant controls spread over Gamma: for intervals and boxes `levels` equally spaced
/// volatilities from the lower to the upper corner; for matrix sets every member.
std::vector<ScenarioControl> volatility_ladder(const UncertaintySet& gamma, const Partition& p,
                                               std::size_t levels = 5);

/// Per subinterval, the member maximising (proxy(t_k) >= 0) or minimising the variance along a.
ScenarioControl bang_bang_control(const UncertaintySet& gamma, const Partition& p, const Direction& a,
                                  const std::function<double(double)>& proxy);

class SamplePath {
 public:
  SamplePath(Partition partition, std::size_t dim, std::vector<double> increments,
             std::uint64_t seed, std::uint64_t path_index);

  const Partition& partition() const noexcept { return partition_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t steps() const noexcept { return partition_.steps(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t path_index() const noexcept { return path_index_; }

  /// Delta B_k as a d-vector.
  std::span<const double> increment(std::size_t k) const {
    return {increments_.data() + k * dim_, dim_};
  }
  const std::vector<double>& increments() const noexcept { return increments_; }
  /// (a, Delta B_k)
  double increment_along(std::size_t k, const Direction& a) const;
  /// B^a at every partition point (size steps() + 1).
  std::vector<double> positions(const Direction& a) const;
  /// B_{t_k} as a d-vector (componentwise running sums of the increments).
  std::span<const double> position(std::size_t k) const {
    return {cumulative_.data() + k * dim_, dim_};
  }
  /// B_T as a d-vector.
  std::vector<double> terminal() const;

  /// Rows "t,B1,...,Bd" with a header line.
  std::string to_csv() const;

  friend void regenerate_path(const ScenarioControl&, std::uint64_t, std::uint64_t, SamplePath&);

 private:
  void rebuild_cumulative();

  Partition partition_;
  std::size_t dim_;
  std::vector<double> increments_;
  std::vector<double> cumulative_;
  std::uint64_t seed_;
  std::uint64_t path_index_;
};

/// Delta B_k = gamma_k sqrt(dt_k) Z_k, Z drawn from Philox keyed by seed with
/// counter (normal block, path index). Deterministic in (seed, path_index, k).
SamplePath generate_path(const ScenarioControl& control, std::uint64_t seed, std::uint64_t path_index = 0);

/// Refills `out` in place (same partition and dimension) to avoid reallocation.
void regenerate_path(const ScenarioControl& control, std::uint64_t seed, std::uint64_t path_index,
                     SamplePath& out);

/// The observed past of a path up to (but excluding) step k.
class PathPrefix {
 public:
  PathPrefix(const SamplePath& path, std::size_t k) : path_(path), k_(k) {}
  std::size_t step() const noexcept { return k_; }
  double time() const { return path_.partition().points()[k_]; }
  std::size_t dim() const noexcept { return path_.dim(); }
  /// Delta B_j for j < step(); throws PartitionError for j >= step().
  std::span<const double> increment(std::size_t j) const;
  /// (a, B_{t_k})
  double position(const Direction& a) const;

 private:
  const SamplePath& path_;
  std::size_t k_;
};

/// xi_j evaluated at the left end t_j of each subinterval of its own partition.
struct SimpleProcess {
  Partition partition;
  std::function<double(std::size_t j, const PathPrefix& prefix)> value;

  static SimpleProcess constant(const Partition& p, double c);
  /// xi_j = (a, B_{t_j})
  static SimpleProcess position(const Partition& p, const Direction& a);
  /// xi_j = f(t_j)
  static SimpleProcess deterministic(const Partition& p, std::function<double(double)> f);
};

/// xi value in force on each path step. Throws PartitionError unless the path partition
/// refines eta's partition and both share the horizon.
std::vector<double> step_values(const SimpleProcess& eta, const SamplePath& path);

/// sum_k xi_k (B^a_{t_{k+1}} - B^a_{t_k})
double ito_integral(const SimpleProcess& eta, const SamplePath& path, const Direction& a);
/// sum_k xi_k (t_{k+1} - t_k)
double bochner_integral(const SimpleProcess& eta, const SamplePath& path);
/// Running <B^a> at every partition point.
std::vector<double> quadratic_variation(const SamplePath& path, const Direction& a);
/// Running 1/4 [<B^{a+abar}> - <B^{a-abar}>].
std::vector<double> mutual_variation(const SamplePath& path, const Direction& a, const Direction& abar);
/// sum_k xi_k (<B^a>_{t_{k+1}} - <B^a>_{t_k})
double integral_wrt_qv(const SimpleProcess& eta, const SamplePath& path, const Direction& a);
/// sum_k xi_k Delta<B^a, B^abar>_k
double integral_wrt_mutual(const SimpleProcess& eta, const SamplePath& path, const Direction& a,
                           const Direction& abar);

using PathFunctional = std::function<double(const SamplePath&)>;

struct MonteCarloBudget {
  double max_normals = 4e9;  ///< paths * steps * dim * controls
};

/// Samples of X under one control, paths 0..n_paths-1.
ScenarioSamples simulate(const PathFunctional& x, const ScenarioControl& control, std::size_t n_paths,
                         std::uint64_t seed);

/// One ensemble entry per control; the same seed gives common random numbers across controls.
Ensemble simulate_family(const PathFunctional& x, const std::vector<ScenarioControl>& controls,
                         std::size_t n_paths, std::uint64_t seed, const MonteCarloBudget& budget = {});

PairedEnsemble simulate_family_paired(const PathFunctional& x, const PathFunctional& y,
                                      const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                                      std::uint64_t seed, const MonteCarloBudget& budget = {});

struct ScenarioSupResult {
  double value = 0.0;
  std::size_t argmax = 0;
  std::string argmax_label;
  double standard_error = 0.0;
  std::vector<std::string> labels;
  std::vector<MeanStats> per_control;

  nlohmann::json to_json() const;
};

/// max over controls of the Monte Carlo mean of X. Throws DomainError on an empty
/// family or a control outside gamma, BudgetError when the budget is exceeded.
ScenarioSupResult scenario_sup_expect(const PathFunctional& x, const UncertaintySet& gamma,
                                      const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                                      std::uint64_t seed, const MonteCarloBudget& budget = {});

}  // namespace gcalc
