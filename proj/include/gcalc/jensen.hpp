#pragma once

// G-martingales with the -2G(eta) compensator, the G-convexity criterion
//
//   G(h'(y) A + h''(y) z z^T) - h'(y) G(A) >= 0   for all (y, z, A),
//
// and the Jensen inequality E[h(X)] >= h(E[X]) it characterises.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gcalc/gexpectation.hpp"
#include "gcalc/sublinear.hpp"
#include "json.hpp"

namespace gcalc {

struct ScalarFunction2 {
  std::string name;
  std::function<double(double)> h;
  std::function<double(double)> dh;
  std::function<double(double)> d2h;
};

/// linear, neg_linear, square, neg_square, exp; or "poly" with coefficients c0, c1, ...
ScalarFunction2 scalar_function(const std::string& name, const std::vector<double>& coefficients = {});

struct ConvexityProbe {
  double y = 0.0;
  std::vector<double> z;
  SymMatrix a;
};

/// y in {-2, ..., 2} plus `extra_y`; z in {0, +-e_i}; A in {0, +-e_i e_i^T, +-dd^T} for each d in `directions`.
std::vector<ConvexityProbe> default_probes(const UncertaintySet& gamma, const std::vector<double>& extra_y = {},
                                           const std::vector<Direction>& directions = {});

struct ConvexityReport {
  std::string function;
  double min_value = 0.0;
  ConvexityProbe worst;
  std::size_t probes = 0;
  bool g_convex = false;  ///< min_value >= -1e-10 on the probe set (a numeric verdict)

  nlohmann::json to_json() const;
};

/// Throws DomainError when a derivative is missing or the probe set is empty.
ConvexityReport is_g_convex(const ScalarFunction2& h, const UncertaintySet& gamma,
                            const std::vector<ConvexityProbe>& probes);

struct JensenReport {
  double expect_h_phi = 0.0;   ///< E[h(phi(B_T^a))]
  double expect_phi = 0.0;     ///< E[phi(B_T^a)]
  double delta = 0.0;          ///< E[h(phi)] - h(E[phi])
  double conditional_min = 0.0;  ///< min over the prefix grid of E[h(X)|H_{T/2}] - h(E[X|H_{T/2}])

  nlohmann::json to_json() const;
};

JensenReport jensen_check(const ScalarFunction2& h, const std::function<double(double)>& phi,
                          const UncertaintySet& gamma, const Direction& a, double horizon,
                          const ExpectationConfig& cfg = {}, double interior_fraction = 0.5);

struct MartingaleReport {
  double max_violation = 0.0;  ///< max over the prefix grid of |E[M_t|H_s] - M_s|
  double negated_gap_min = 0.0;  ///< min over the grid of E[-M_t|H_s] + M_s (0 when -M is a martingale)
  double negated_gap_max = 0.0;
  double compensator_rate = 0.0;  ///< 2G(eta)

  nlohmann::json to_json() const;
};

/// M_t = M_0 + (phi, B_t) + int eta^{ij} d<B^i, B^j> - 2G(eta) t with constant eta = c a a^T and
/// phi = k a (rank one; always true for d = 1). The quadratic variation term is represented on the
/// cylinder by (eta B_t, B_t), whose conditional G-expectation given H_s is the same.
/// Throws DomainError for inputs that are not of this form or unless 0 < s < t.
MartingaleReport compensated_martingale_check(const SymMatrix& eta, const std::vector<double>& phi,
                                              const UncertaintySet& gamma, double s, double t,
                                              const ExpectationConfig& cfg = {}, double m0 = 0.0,
                                              double interior_fraction = 0.5);

struct SubmartingaleReport {
  double min_margin = 0.0;  ///< min over the grid of E[h(E[X|H_t])|H_s] - h(E[X|H_s])
  double max_abs_margin = 0.0;

  nlohmann::json to_json() const;
};

/// For single-time X = phi(B_T) any 0 < s < t < T is accepted; otherwise s and t must be
/// observation times of X.
SubmartingaleReport submartingale_check(const ScalarFunction2& h, const CylinderFunctional& x,
                                        const UncertaintySet& gamma, double s, double t,
                                        const ExpectationConfig& cfg = {}, double interior_fraction = 0.5);

}  // namespace gcalc
