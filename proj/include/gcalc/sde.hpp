#pragma once

// SDEs driven by G-Brownian motion, solved per scenario path:
//
//   dX = b(X) dt + h_ij(X) d<B^i, B^j> + sigma_j(X) dB^j,   X_0 = x0.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcalc/pathspace.hpp"
#include "gcalc/sublinear.hpp"
#include "json.hpp"

namespace gcalc {

/// out = f(x); both of the state dimension.
using VectorField = std::function<void(std::span<const double> x, std::span<double> out)>;

struct SdeSpec {
  std::string name;
  std::size_t state_dim = 1;
  std::size_t noise_dim = 1;
  VectorField drift;                  ///< b; empty means zero
  std::vector<VectorField> qv_drift;  ///< h_ij at index i * noise_dim + j; empty means zero
  std::vector<VectorField> diffusion; ///< sigma_j; empty means zero
  std::vector<double> x0;
  double lipschitz = 1.0;             ///< declared bound K

  /// Throws DimensionError on inconsistent sizes.
  void validate() const;
};

/// Named coefficient library (state_dim = noise_dim = 1):
///   zero, additive (dX = nu dB), geometric (dX = mu X dt + kappa X d<B> + nu X dB),
///   affine (dX = (a + mu X) dt + (k0 + kappa X) d<B> + (n0 + nu X) dB),
///   sine (dX = mu sin X dt + kappa cos X d<B> + (n0 + nu sin X) dB).
/// Parameters come from `params` (missing keys take defaults); x0 from params["x0"].
SdeSpec make_sde(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// Largest |f(x) - f(y)| / |x - y| over random pairs in [-radius, radius]^n, all coefficients.
double estimate_lipschitz(const SdeSpec& spec, double radius = 3.0, std::size_t pairs = 2000,
                          std::uint64_t seed = 1);

struct StatePath {
  Partition partition;
  std::size_t state_dim = 1;
  std::vector<double> states;  ///< (steps + 1) x state_dim, row-major

  std::span<const double> at(std::size_t k) const { return {states.data() + k * state_dim, state_dim}; }
  std::string to_csv() const;
};

inline constexpr double kBlowUpThreshold = 1e12;

/// Euler scheme with Delta<B^i, B^j> = Delta B^i Delta B^j. Throws BlowUpError when
/// max |X_k| exceeds kBlowUpThreshold, naming the step.
StatePath euler_solve(const SdeSpec& spec, const SamplePath& path);

/// sum_k sum_j sigma_j(X_k) Delta B^j_k along an Euler solution.
double stochastic_integral_part(const SdeSpec& spec, const StatePath& x, const SamplePath& path);

// ---------------------------------------------------------------------------
// Picard contraction

/// C = 3 K^2 (T + d s + d^2 s^2 T) with s = sup tr(gamma gamma^T); see docs/picard_constant.md.
double picard_constant(const SdeSpec& spec, const UncertaintySet& gamma, double horizon);

struct PicardConfig {
  std::size_t iterations = 8;
  std::size_t n_paths = 400;
  std::uint64_t seed = 11;
  double weight = 0.0;           ///< c in e^{-2ct}; <= 0 selects picard_constant
  double fixed_point_tol = 1e-6;
  std::size_t max_fixed_point_iterations = 400;
};

struct PicardReport {
  double weight = 0.0;
  std::vector<double> distances;  ///< squared weighted distance before each application, then after the last
  std::vector<double> ratios;     ///< distances[i + 1] / distances[i]
  double max_ratio = 0.0;
  bool degenerate = false;        ///< Y = Y': distance 0, ratio reported as 0
  double lipschitz_estimate = 0.0;
  bool lipschitz_ok = true;       ///< estimate within the declared K
  std::size_t fixed_point_iterations = 0;
  double fixed_point_distance = 0.0;  ///< weighted norm of the last step before convergence
  double fixed_point_residual = 0.0;  ///< weighted norm moved by one more application
  bool fixed_point_converged = false;

  nlohmann::json to_json() const;
};

/// Initial guesses are functions of (t, x0); defaults Y = x0 and Y' = 0.
using InitialGuess = std::function<double(double t, std::size_t component)>;

/// Applies Lambda(Y) = x0 + sum [b(Y) dt + h_ij(Y) dB^i dB^j + sigma_j(Y) dB^j] on every path of the
/// control family and reports the ratio of squared weighted distances
/// sum_k sup_control mean |Z_k|^2 e^{-2 c t_k} dt_k between successive images.
PicardReport picard_contraction(const SdeSpec& spec, const UncertaintySet& gamma,
                                const std::vector<ScenarioControl>& controls, const PicardConfig& cfg,
                                const InitialGuess& y = {}, const InitialGuess& y_prime = {});

// ---------------------------------------------------------------------------
// G-Ito formula residual

struct ItoFunction {
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;  ///< n
  std::function<void(std::span<const double>, std::span<double>)> hessian;   ///< n x n row-major
};

/// X_t = x0 + int alpha dt + int eta^{ij} d<B^i, B^j> + int beta^j dB^j with step ingredients
/// evaluated at the left end of each subinterval of `partition`.
struct ItoIngredients {
  std::size_t state_dim = 1;
  std::size_t noise_dim = 1;
  std::vector<double> x0;
  Partition partition{std::vector<double>{0.0, 1.0}};
  /// alpha (n), eta (n * d * d, index (nu * d + i) * d + j), beta (n * d, index nu * d + j)
  std::function<void(std::size_t j, const PathPrefix&, std::span<double>)> alpha;
  std::function<void(std::size_t j, const PathPrefix&, std::span<double>)> eta;
  std::function<void(std::size_t j, const PathPrefix&, std::span<double>)> beta;

  static ItoIngredients constant(std::vector<double> x0, std::vector<double> alpha, std::vector<double> eta,
                                 std::vector<double> beta, std::size_t noise_dim, double horizon);
};

/// Phi(X_T) - Phi(X_0) minus the dB, dt and d<B^i, B^j> sums of the G-Ito formula, with the
/// second-order coefficient d_nu Phi eta^{nu ij} + 1/2 d_mu d_nu Phi beta^{mu i} beta^{nu j}.
double ito_residual(const ItoFunction& phi, const ItoIngredients& x, const SamplePath& path);

/// Aggregates consecutive increments in groups of `factor` (a coarser view of the same path).
SamplePath coarsen(const SamplePath& path, std::size_t factor);

struct ResidualStudy {
  std::vector<std::size_t> steps;  ///< per level
  std::vector<double> rms;         ///< root mean square residual per level
  double order = 0.0;              ///< least-squares slope of log rms against log mesh
  double order_se = 0.0;           ///< delta-method standard error over paths
  bool exact_zero = false;         ///< every residual vanished to rounding

  nlohmann::json to_json() const;
};

/// Residuals on nested refinements of the same paths (finest level simulated, coarser
/// levels by aggregation), levels with steps base, 2 base, ..., 2^{levels-1} base.
ResidualStudy ito_residual_study(const ItoFunction& phi, const ItoIngredients& x, const VolMatrix& gamma,
                                 std::size_t base_steps, std::size_t levels, std::size_t n_paths,
                                 std::uint64_t seed);

/// Named test functions: linear, square, cube, sine, exp, cube_2d (x^3 + x y^2 for n = 2).
ItoFunction ito_function(const std::string& name);

}  // namespace gcalc
