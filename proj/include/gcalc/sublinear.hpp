#pragma once

// Uncertainty sets and the sublinear generator G(A) = 1/2 sup tr[g g^T A].

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gcalc {

/// A vector a in R^d selecting the one-dimensional projection (a, x).
class Direction {
 public:
  Direction() = default;
  explicit Direction(std::vector<double> components);
  Direction(std::initializer_list<double> components);

  static Direction unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> components() const noexcept { return components_; }
  bool is_zero() const noexcept;
  double dot(std::span<const double> x) const;

 private:
  std::vector<double> components_;
};

/// Symmetric d x d matrix stored as its upper triangle.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);

  /// Builds from full rows; throws DomainError when rows[i][j] != rows[j][i].
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix diagonal(std::span<const double> diag);
  static SymMatrix identity(std::size_t dim);
  /// a a^T
  static SymMatrix outer(const Direction& a);
  static SymMatrix scalar(double value) { return diagonal(std::vector<double>{value}); }

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator-() const;
  SymMatrix operator*(double lambda) const;

  bool is_zero() const noexcept;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t dim_ = 0;
  std::vector<double> upper_;
};

inline SymMatrix operator*(double lambda, const SymMatrix& m) { return m * lambda; }

/// General square matrix gamma, a volatility loading (row-major).
class VolMatrix {
 public:
  VolMatrix() = default;
  VolMatrix(std::size_t dim, std::vector<double> row_major);
  static VolMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static VolMatrix scalar(double value) { return VolMatrix(1, {value}); }
  static VolMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  /// tr[g g^T A]
  double trace_quadratic(const SymMatrix& a) const;
  /// y = g x
  void apply(std::span<const double> x, std::span<double> y) const;
  /// Largest absolute entry; used for the boundedness invariant.
  double max_abs() const noexcept;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct Interval1D {
  double sigma_low;
  double sigma_high;
};

struct AxisInterval {
  double lo;
  double hi;
};

struct DiagonalBox {
  std::vector<AxisInterval> axes;
};

struct MatrixSet {
  std::vector<VolMatrix> matrices;
};

/// The bounded closed set Gamma generating G. Construction validates invariants.
class UncertaintySet {
 public:
  using Kind = std::variant<Interval1D, DiagonalBox, MatrixSet>;

  static UncertaintySet interval(double sigma_low, double sigma_high);
  static UncertaintySet diagonal_box(std::vector<AxisInterval> axes);
  static UncertaintySet matrix_set(std::vector<VolMatrix> matrices);
  /// Singleton {gamma}: the classical (linear) case.
  static UncertaintySet singleton(VolMatrix gamma);

  std::size_t dim() const noexcept { return dim_; }
  const Kind& kind() const noexcept { return kind_; }
  std::string kind_name() const;

  /// sup over Gamma of tr[g g^T] (the largest total variance rate).
  double max_variance() const;
  /// True when gamma lies in (or within 1e-12 of) this set.
  bool contains(const VolMatrix& gamma, double tol = 1e-12) const;

  nlohmann::json to_json() const;
  static UncertaintySet from_json(const nlohmann::json& j);

  friend bool operator==(const UncertaintySet& a, const UncertaintySet& b);

 private:
  UncertaintySet(Kind kind, std::size_t dim) : kind_(std::move(kind)), dim_(dim) {}

  Kind kind_;
  std::size_t dim_;
};

/// G(A) = 1/2 sup_{g in Gamma} tr[g g^T A].
double g_value(const UncertaintySet& gamma, const SymMatrix& a);

/// sigma_A = sup_{g in Gamma} tr[g g^T A] = 2 G(A).
double sigma_of(const UncertaintySet& gamma, const SymMatrix& a);

/// The pair (sigma_{aa^T}, sigma_{-aa^T}) driving the rank-one reduction.
struct DirectionalVariance {
  double plus;   ///< sigma_{aa^T} >= 0
  double minus;  ///< sigma_{-aa^T} <= 0
};

DirectionalVariance directional_variance(const UncertaintySet& gamma, const Direction& a);

/// G_a(beta) = 1/2 [sigma_{aa^T} beta^+ + sigma_{-aa^T} beta^-].
double g_directional(const UncertaintySet& gamma, const Direction& a, double beta);

struct DominationReport {
  double max_violation = 0.0;  ///< max over samples of G_sub(A) - G_sup(A)
  std::size_t worst_sample = 0;
  std::vector<double> g_sub;
  std::vector<double> g_sup;
};

/// Checks G_sub(A) <= G_sup(A) on every sample.
DominationReport check_domination(const UncertaintySet& sub, const UncertaintySet& sup,
                                  std::span<const SymMatrix> samples);

}  // namespace gcalc
