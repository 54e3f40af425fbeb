#include "gcalc/sublinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcalc/errors.hpp"

namespace gcalc {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

void require_dim(const UncertaintySet& gamma, std::size_t d, const char* what) {
  if (gamma.dim() != d) {
    throw DimensionError(std::string(what) + " has dimension " + std::to_string(d) +
                         " but the uncertainty set has dimension " + std::to_string(gamma.dim()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Direction

Direction::Direction(std::vector<double> components) : components_(std::move(components)) {
  for (double c : components_) require_finite(c, "direction component");
}

Direction::Direction(std::initializer_list<double> components)
    : Direction(std::vector<double>(components)) {}

Direction Direction::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw DimensionError("unit direction axis out of range");
  std::vector<double> v(dim, 0.0);
  v[axis] = 1.0;
  return Direction(std::move(v));
}

bool Direction::is_zero() const noexcept {
  return std::all_of(components_.begin(), components_.end(), [](double c) { return c == 0.0; });
}

double Direction::dot(std::span<const double> x) const {
  if (x.size() != components_.size()) throw DimensionError("direction/vector size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += components_[i] * x[i];
  return s;
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), upper_(dim * (dim + 1) / 2, 0.0) {
  if (dim == 0) throw DimensionError("matrix dimension must be positive");
}

std::size_t SymMatrix::index(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw DimensionError("matrix index out of range");
  if (i > j) std::swap(i, j);
  // row-major upper triangle: row i starts after sum_{r<i} (dim - r) entries
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

double SymMatrix::operator()(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  require_finite(value, "matrix entry");
  upper_[index(i, j)] = value;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  SymMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw DimensionError("matrix rows must be square");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i; j < rows.size(); ++j) {
      if (rows[i][j] != rows[j][i]) throw DomainError("matrix is not symmetric");
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::outer(const Direction& a) {
  SymMatrix m(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) m.set(i, j, a[i] * a[j]);
  return m;
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  if (other.dim_ != dim_) throw DimensionError("matrix sum dimension mismatch");
  SymMatrix r = *this;
  for (std::size_t k = 0; k < upper_.size(); ++k) r.upper_[k] += other.upper_[k];
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const { return *this + (-other); }

SymMatrix SymMatrix::operator-() const { return *this * -1.0; }

SymMatrix SymMatrix::operator*(double lambda) const {
  SymMatrix r = *this;
  for (double& v : r.upper_) v *= lambda;
  return r;
}

bool SymMatrix::is_zero() const noexcept {
  return std::all_of(upper_.begin(), upper_.end(), [](double v) { return v == 0.0; });
}

// ---------------------------------------------------------------------------
// VolMatrix

VolMatrix::VolMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (dim == 0 || data_.size() != dim * dim) throw DimensionError("volatility matrix must be square");
  for (double v : data_) require_finite(v, "volatility matrix entry");
}

VolMatrix VolMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw DimensionError("volatility matrix rows must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return VolMatrix(rows.size(), std::move(flat));
}

VolMatrix VolMatrix::diagonal(std::span<const double> diag) {
  std::vector<double> flat(diag.size() * diag.size(), 0.0);
  for (std::size_t i = 0; i < diag.size(); ++i) flat[i * diag.size() + i] = diag[i];
  return VolMatrix(diag.size(), std::move(flat));
}

double VolMatrix::trace_quadratic(const SymMatrix& a) const {
  if (a.dim() != dim_) throw DimensionError("tr[g g^T A] dimension mismatch");
  // tr[g g^T A] = sum_k (g e_k)^T A (g e_k), column by column
  double tr = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      const double gik = (*this)(i, k);
      if (gik == 0.0) continue;
      for (std::size_t j = 0; j < dim_; ++j) tr += gik * a(i, j) * (*this)(j, k);
    }
  }
  return tr;
}

void VolMatrix::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += data_[i * dim_ + j] * x[j];
    y[i] = s;
  }
}

double VolMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// UncertaintySet

UncertaintySet UncertaintySet::interval(double sigma_low, double sigma_high) {
  require_finite(sigma_low, "sigma_low");
  require_finite(sigma_high, "sigma_high");
  if (sigma_low < 0.0 || sigma_high < sigma_low || sigma_high <= 0.0) {
    throw DomainError("interval requires 0 <= sigma_low <= sigma_high and sigma_high > 0");
  }
  return UncertaintySet(Interval1D{sigma_low, sigma_high}, 1);
}

UncertaintySet UncertaintySet::diagonal_box(std::vector<AxisInterval> axes) {
  if (axes.empty()) throw DimensionError("diagonal box needs at least one axis");
  for (const auto& ax : axes) {
    require_finite(ax.lo, "axis lo");
    require_finite(ax.hi, "axis hi");
    if (ax.lo < 0.0 || ax.hi < ax.lo) throw DomainError("diagonal box requires 0 <= lo <= hi");
  }
  const std::size_t d = axes.size();
  return UncertaintySet(DiagonalBox{std::move(axes)}, d);
}

UncertaintySet UncertaintySet::matrix_set(std::vector<VolMatrix> matrices) {
  if (matrices.empty()) throw DomainError("matrix set must be nonempty");
  const std::size_t d = matrices.front().dim();
  for (const auto& m : matrices) {
    if (m.dim() != d) throw DimensionError("matrix set members must share one dimension");
  }
  return UncertaintySet(MatrixSet{std::move(matrices)}, d);
}

UncertaintySet UncertaintySet::singleton(VolMatrix gamma) {
  std::vector<VolMatrix> one;
  one.push_back(std::move(gamma));
  return matrix_set(std::move(one));
}

std::string UncertaintySet::kind_name() const {
  struct Visitor {
    std::string operator()(const Interval1D&) const { return "interval1d"; }
    std::string operator()(const DiagonalBox&) const { return "diagonal_box"; }
    std::string operator()(const MatrixSet&) const { return "matrix_set"; }
  };
  return std::visit(Visitor{}, kind_);
}

double UncertaintySet::max_variance() const { return sigma_of(*this, SymMatrix::identity(dim_)); }

bool UncertaintySet::contains(const VolMatrix& gamma, double tol) const {
  if (gamma.dim() != dim_) return false;
  if (const auto* iv = std::get_if<Interval1D>(&kind_)) {
    const double g = gamma(0, 0);
    return g >= iv->sigma_low - tol && g <= iv->sigma_high + tol;
  }
  if (const auto* box = std::get_if<DiagonalBox>(&kind_)) {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        const double g = gamma(i, j);
        if (i != j) {
          if (std::abs(g) > tol) return false;
        } else if (g < box->axes[i].lo - tol || g > box->axes[i].hi + tol) {
          return false;
        }
      }
    }
    return true;
  }
  const auto& set = std::get<MatrixSet>(kind_);
  return std::any_of(set.matrices.begin(), set.matrices.end(), [&](const VolMatrix& m) {
    for (std::size_t k = 0; k < m.data().size(); ++k)
      if (std::abs(m.data()[k] - gamma.data()[k]) > tol) return false;
    return true;
  });
}

nlohmann::json UncertaintySet::to_json() const {
  using nlohmann::json;
  if (const auto* iv = std::get_if<Interval1D>(&kind_)) {
    return json{{"kind", "interval1d"}, {"sigma_low", iv->sigma_low}, {"sigma_high", iv->sigma_high}};
  }
  if (const auto* box = std::get_if<DiagonalBox>(&kind_)) {
    json axes = json::array();
    for (const auto& ax : box->axes) axes.push_back(json::array({ax.lo, ax.hi}));
    return json{{"kind", "diagonal_box"}, {"axes", axes}};
  }
  json mats = json::array();
  for (const auto& m : std::get<MatrixSet>(kind_).matrices) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  return json{{"kind", "matrix_set"}, {"matrices", mats}};
}

UncertaintySet UncertaintySet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("gamma.kind", "missing uncertainty set kind");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "interval1d") {
      return interval(j.at("sigma_low").get<double>(), j.at("sigma_high").get<double>());
    }
    if (kind == "diagonal_box") {
      std::vector<AxisInterval> axes;
      for (const auto& ax : j.at("axes")) {
        if (!ax.is_array() || ax.size() != 2) throw ConfigError("gamma.axes", "each axis must be [lo, hi]");
        axes.push_back({ax[0].get<double>(), ax[1].get<double>()});
      }
      return diagonal_box(std::move(axes));
    }
    if (kind == "matrix_set") {
      std::vector<VolMatrix> mats;
      for (const auto& m : j.at("matrices")) mats.push_back(VolMatrix::from_rows(m.get<std::vector<std::vector<double>>>()));
      return matrix_set(std::move(mats));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("gamma", e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("gamma", e.what());
  }
  throw ConfigError("gamma.kind", "unknown uncertainty set kind '" + kind + "'");
}

bool operator==(const UncertaintySet& a, const UncertaintySet& b) { return a.to_json() == b.to_json(); }

// ---------------------------------------------------------------------------
// Generator

double g_value(const UncertaintySet& gamma, const SymMatrix& a) {
  require_dim(gamma, a.dim(), "matrix");
  if (const auto* iv = std::get_if<Interval1D>(&gamma.kind())) {
    const double x = a(0, 0);
    return 0.5 * (iv->sigma_high * iv->sigma_high * pos(x) - iv->sigma_low * iv->sigma_low * neg(x));
  }
  if (const auto* box = std::get_if<DiagonalBox>(&gamma.kind())) {
    // diagonal gamma: tr[g g^T A] = sum_i g_i^2 A_ii, separable per axis
    double s = 0.0;
    for (std::size_t i = 0; i < box->axes.size(); ++i) {
      const double x = a(i, i);
      s += box->axes[i].hi * box->axes[i].hi * pos(x) - box->axes[i].lo * box->axes[i].lo * neg(x);
    }
    return 0.5 * s;
  }
  const auto& set = std::get<MatrixSet>(gamma.kind());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& m : set.matrices) best = std::max(best, m.trace_quadratic(a));
  return 0.5 * best;
}

double sigma_of(const UncertaintySet& gamma, const SymMatrix& a) { return 2.0 * g_value(gamma, a); }

DirectionalVariance directional_variance(const UncertaintySet& gamma, const Direction& a) {
  require_dim(gamma, a.dim(), "direction");
  const SymMatrix aa = SymMatrix::outer(a);
  return {sigma_of(gamma, aa), sigma_of(gamma, -aa)};
}

double g_directional(const UncertaintySet& gamma, const Direction& a, double beta) {
  const auto v = directional_variance(gamma, a);
  return 0.5 * (v.plus * pos(beta) + v.minus * neg(beta));
}

DominationReport check_domination(const UncertaintySet& sub, const UncertaintySet& sup,
                                  std::span<const SymMatrix> samples) {
  if (sub.dim() != sup.dim()) throw DimensionError("domination check: set dimensions differ");
  DominationReport r;
  r.max_violation = samples.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double gs = g_value(sub, samples[k]);
    const double gp = g_value(sup, samples[k]);
    r.g_sub.push_back(gs);
    r.g_sup.push_back(gp);
    if (gs - gp > r.max_violation) {
      r.max_violation = gs - gp;
      r.worst_sample = k;
    }
  }
  return r;
}

}  // namespace gcalc
