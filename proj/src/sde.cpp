#include "gcalc/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "gcalc/errors.hpp"

namespace gcalc {

void SdeSpec::validate() const {
  if (state_dim == 0 || noise_dim == 0) throw DimensionError("SDE dimensions must be positive");
  if (x0.size() != state_dim) throw DimensionError("x0 has the wrong dimension");
  if (!qv_drift.empty() && qv_drift.size() != noise_dim * noise_dim) {
    throw DimensionError("h_ij needs noise_dim^2 entries");
  }
  if (!diffusion.empty() && diffusion.size() != noise_dim) throw DimensionError("sigma_j needs noise_dim entries");
  if (!(lipschitz >= 0.0)) throw DomainError("Lipschitz constant must be >= 0");
}

namespace {

double param(const nlohmann::json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw ConfigError(std::string("sde.params.") + key, "expected a number");
  return p.at(key).get<double>();
}

VectorField affine_field(double c0, double c1) {
  return [c0, c1](std::span<const double> x, std::span<double> out) { out[0] = c0 + c1 * x[0]; };
}

}  // namespace

SdeSpec make_sde(const std::string& name, const nlohmann::json& params) {
  if (!params.is_object()) throw ConfigError("sde.params", "expected an object");
  SdeSpec s;
  s.name = name;
  s.x0 = {param(params, "x0", 1.0)};
  if (name == "zero") {
    s.lipschitz = 0.0;
  } else if (name == "additive") {
    const double nu = param(params, "nu", 1.0);
    s.diffusion = {affine_field(nu, 0.0)};
    s.lipschitz = 0.0;
  } else if (name == "geometric" || name == "linear") {
    const double mu = param(params, "mu", 0.0), kappa = param(params, "kappa", 0.0), nu = param(params, "nu", 1.0);
    s.drift = affine_field(0.0, mu);
    s.qv_drift = {affine_field(0.0, kappa)};
    s.diffusion = {affine_field(0.0, nu)};
    s.lipschitz = std::max({std::abs(mu), std::abs(kappa), std::abs(nu)});
  } else if (name == "affine") {
    const double a = param(params, "a", 0.0), mu = param(params, "mu", 0.0);
    const double k0 = param(params, "k0", 0.0), kappa = param(params, "kappa", 0.0);
    const double n0 = param(params, "n0", 0.0), nu = param(params, "nu", 1.0);
    s.drift = affine_field(a, mu);
    s.qv_drift = {affine_field(k0, kappa)};
    s.diffusion = {affine_field(n0, nu)};
    s.lipschitz = std::max({std::abs(mu), std::abs(kappa), std::abs(nu)});
  } else if (name == "sine") {
    const double mu = param(params, "mu", 0.5), kappa = param(params, "kappa", 0.5);
    const double n0 = param(params, "n0", 0.2), nu = param(params, "nu", 0.5);
    s.drift = [mu](std::span<const double> x, std::span<double> o) { o[0] = mu * std::sin(x[0]); };
    s.qv_drift = {[kappa](std::span<const double> x, std::span<double> o) { o[0] = kappa * std::cos(x[0]); }};
    s.diffusion = {[n0, nu](std::span<const double> x, std::span<double> o) { o[0] = n0 + nu * std::sin(x[0]); }};
    s.lipschitz = std::max({std::abs(mu), std::abs(kappa), std::abs(nu)});
  } else {
    throw ConfigError("sde.model", "unknown SDE model '" + name + "'");
  }
  if (params.contains("lipschitz")) s.lipschitz = param(params, "lipschitz", s.lipschitz);
  s.validate();
  return s;
}

double estimate_lipschitz(const SdeSpec& spec, double radius, std::size_t pairs, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.state_dim;
  std::vector<const VectorField*> fields;
  if (spec.drift) fields.push_back(&spec.drift);
  for (const auto& f : spec.qv_drift) if (f) fields.push_back(&f);
  for (const auto& f : spec.diffusion) if (f) fields.push_back(&f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> x(n), y(n), fx(n), fy(n);
  double best = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    double dxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) dxy += (x[i] - y[i]) * (x[i] - y[i]);
    if (dxy == 0.0) continue;
    for (const auto* f : fields) {
      (*f)(x, fx);
      (*f)(y, fy);
      double dfx = 0.0;
      for (std::size_t i = 0; i < n; ++i) dfx += (fx[i] - fy[i]) * (fx[i] - fy[i]);
      best = std::max(best, std::sqrt(dfx / dxy));
    }
  }
  return best;
}

std::string StatePath::to_csv() const {
  std::string out = "t";
  for (std::size_t i = 0; i < state_dim; ++i) out += ",X" + std::to_string(i + 1);
  out += "\n";
  char buf[40];
  for (std::size_t k = 0; k <= partition.steps(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", partition.points()[k]);
    out += buf;
    for (double v : at(k)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

namespace {

// Z_{k+1} = Z_k + b(Y_k) dt + h_ij(Y_k) dB^i dB^j + sigma_j(Y_k) dB^j, Z_0 = x0.
// With y == nullptr the recursion is evaluated on its own output (the Euler scheme).
void euler_map(const SdeSpec& spec, const SamplePath& path, const double* y, double* z) {
  const std::size_t n = spec.state_dim, d = spec.noise_dim;
  const std::size_t steps = path.steps();
  std::vector<double> f(n);
  std::copy(spec.x0.begin(), spec.x0.end(), z);
  for (std::size_t k = 0; k < steps; ++k) {
    const double* yk = (y != nullptr ? y : z) + k * n;
    const std::span<const double> ys(yk, n);
    double* zk1 = z + (k + 1) * n;
    const double* zk = z + k * n;
    for (std::size_t i = 0; i < n; ++i) zk1[i] = zk[i];
    const auto db = path.increment(k);
    if (spec.drift) {
      spec.drift(ys, f);
      const double dt = path.partition().dt(k);
      for (std::size_t i = 0; i < n; ++i) zk1[i] += f[i] * dt;
    }
    for (std::size_t i = 0; i < spec.qv_drift.size(); ++i) {
      if (!spec.qv_drift[i]) continue;
      spec.qv_drift[i](ys, f);
      const double dq = db[i / d] * db[i % d];
      for (std::size_t c = 0; c < n; ++c) zk1[c] += f[c] * dq;
    }
    for (std::size_t j = 0; j < spec.diffusion.size(); ++j) {
      if (!spec.diffusion[j]) continue;
      spec.diffusion[j](ys, f);
      for (std::size_t c = 0; c < n; ++c) zk1[c] += f[c] * db[j];
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (!(std::abs(zk1[c]) <= kBlowUpThreshold)) {
        throw BlowUpError("state left the blow-up guard at step " + std::to_string(k + 1) + " (|X| > 1e12)");
      }
    }
  }
}

}  // namespace

StatePath euler_solve(const SdeSpec& spec, const SamplePath& path) {
  spec.validate();
  if (path.dim() != spec.noise_dim) throw DimensionError("path dimension differs from the SDE noise dimension");
  StatePath out{path.partition(), spec.state_dim, std::vector<double>((path.steps() + 1) * spec.state_dim)};
  euler_map(spec, path, nullptr, out.states.data());
  return out;
}

double stochastic_integral_part(const SdeSpec& spec, const StatePath& x, const SamplePath& path) {
  if (spec.state_dim != 1) throw DimensionError("stochastic_integral_part is defined for scalar states");
  std::vector<double> f(1);
  double s = 0.0;
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const auto db = path.increment(k);
    for (std::size_t j = 0; j < spec.diffusion.size(); ++j) {
      if (!spec.diffusion[j]) continue;
      spec.diffusion[j](x.at(k), f);
      s += f[0] * db[j];
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

double picard_constant(const SdeSpec& spec, const UncertaintySet& gamma, double horizon) {
  const double s = gamma.max_variance();
  const double d = static_cast<double>(spec.noise_dim);
  const double k = spec.lipschitz;
  return 3.0 * k * k * (horizon + d * s + d * d * s * s * horizon);
}

nlohmann::json PicardReport::to_json() const {
  return {{"weight", weight},
          {"squared_distances", distances},
          {"ratios", ratios},
          {"max_ratio", max_ratio},
          {"degenerate", degenerate},
          {"lipschitz_estimate", lipschitz_estimate},
          {"lipschitz_ok", lipschitz_ok},
          {"fixed_point",
           {{"iterations", fixed_point_iterations},
            {"last_step", fixed_point_distance},
            {"residual", fixed_point_residual},
            {"converged", fixed_point_converged}}}};
}

namespace {

struct PicardEnsemble {
  const SdeSpec& spec;
  std::vector<std::vector<SamplePath>> paths;  // [control][path]
  double weight;

  using Field = std::vector<std::vector<std::vector<double>>>;  // [control][path][(k, i)]

  Field initial(const InitialGuess& g) const {
    Field out(paths.size());
    for (std::size_t c = 0; c < paths.size(); ++c) {
      for (const auto& p : paths[c]) {
        std::vector<double> y((p.steps() + 1) * spec.state_dim);
        for (std::size_t k = 0; k <= p.steps(); ++k) {
          for (std::size_t i = 0; i < spec.state_dim; ++i) y[k * spec.state_dim + i] = g(p.partition().points()[k], i);
        }
        out[c].push_back(std::move(y));
      }
    }
    return out;
  }

  Field apply(const Field& y) const {
    Field out(y.size());
    for (std::size_t c = 0; c < y.size(); ++c) {
      for (std::size_t p = 0; p < y[c].size(); ++p) {
        std::vector<double> z(y[c][p].size());
        euler_map(spec, paths[c][p], y[c][p].data(), z.data());
        out[c].push_back(std::move(z));
      }
    }
    return out;
  }

  // sum_k sup_c mean_p |Y_k - Y'_k|^2 e^{-2 w t_k} dt_k
  double distance(const Field& a, const Field& b) const {
    const std::size_t n = spec.state_dim;
    const auto& part = paths.front().front().partition();
    double total = 0.0;
    for (std::size_t k = 0; k < part.steps(); ++k) {
      double sup = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        double mean = 0.0;
        for (std::size_t p = 0; p < a[c].size(); ++p) {
          double sq = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double diff = a[c][p][k * n + i] - b[c][p][k * n + i];
            sq += diff * diff;
          }
          mean += sq;
        }
        sup = std::max(sup, mean / static_cast<double>(a[c].size()));
      }
      total += sup * std::exp(-2.0 * weight * part.points()[k]) * part.dt(k);
    }
    return total;
  }
};

}  // namespace

PicardReport picard_contraction(const SdeSpec& spec, const UncertaintySet& gamma,
                                const std::vector<ScenarioControl>& controls, const PicardConfig& cfg,
                                const InitialGuess& y, const InitialGuess& y_prime) {
  spec.validate();
  if (controls.empty()) throw DomainError("Picard study needs at least one control");
  if (cfg.n_paths == 0) throw DomainError("Picard study needs at least one path");
  for (const auto& c : controls) {
    c.validate(gamma);
    if (c.dim() != spec.noise_dim) throw DimensionError("control dimension differs from the SDE noise dimension");
    if (!(c.partition == controls.front().partition)) throw PartitionError("controls must share one partition");
  }
  PicardReport rep;
  const double horizon = controls.front().partition.horizon();
  rep.weight = cfg.weight > 0.0 ? cfg.weight : picard_constant(spec, gamma, horizon);
  rep.lipschitz_estimate = estimate_lipschitz(spec);
  rep.lipschitz_ok = rep.lipschitz_estimate <= spec.lipschitz * (1.0 + 1e-9) + 1e-12;

  PicardEnsemble ens{spec, {}, rep.weight};
  for (const auto& c : controls) {
    std::vector<SamplePath> ps;
    for (std::size_t p = 0; p < cfg.n_paths; ++p) ps.push_back(generate_path(c, cfg.seed, p));
    ens.paths.push_back(std::move(ps));
  }

  const InitialGuess gy = y ? y : InitialGuess([&spec](double, std::size_t i) { return spec.x0[i]; });
  const InitialGuess gz = y_prime ? y_prime : InitialGuess([](double, std::size_t) { return 0.0; });
  auto a = ens.initial(gy);
  auto b = ens.initial(gz);
  rep.distances.push_back(ens.distance(a, b));
  if (rep.distances.front() == 0.0) {
    rep.degenerate = true;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
      rep.distances.push_back(0.0);
      rep.ratios.push_back(0.0);
    }
  } else {
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
      a = ens.apply(a);
      b = ens.apply(b);
      const double dist = ens.distance(a, b);
      const double prev = rep.distances.back();
      rep.distances.push_back(dist);
      rep.ratios.push_back(prev > 0.0 ? dist / prev : 0.0);
      rep.max_ratio = std::max(rep.max_ratio, rep.ratios.back());
    }
  }

  // fixed point: iterate from Y until one application moves less than the tolerance
  auto cur = ens.initial(gy);
  for (std::size_t it = 0; it < cfg.max_fixed_point_iterations; ++it) {
    auto next = ens.apply(cur);
    const double step = std::sqrt(ens.distance(next, cur));
    rep.fixed_point_iterations = it + 1;
    cur = std::move(next);
    if (step < cfg.fixed_point_tol) {
      rep.fixed_point_distance = step;
      rep.fixed_point_converged = true;
      break;
    }
    rep.fixed_point_distance = step;
  }
  rep.fixed_point_residual = std::sqrt(ens.distance(ens.apply(cur), cur));
  return rep;
}

// ---------------------------------------------------------------------------

ItoIngredients ItoIngredients::constant(std::vector<double> x0, std::vector<double> alpha,
                                        std::vector<double> eta, std::vector<double> beta,
                                        std::size_t noise_dim, double horizon) {
  const std::size_t n = x0.size();
  if (alpha.size() != n || eta.size() != n * noise_dim * noise_dim || beta.size() != n * noise_dim) {
    throw DimensionError("ingredient sizes do not match the state and noise dimensions");
  }
  ItoIngredients x;
  x.state_dim = n;
  x.noise_dim = noise_dim;
  x.x0 = std::move(x0);
  x.partition = Partition({0.0, horizon});
  auto copy = [](std::vector<double> v) {
    return [v = std::move(v)](std::size_t, const PathPrefix&, std::span<double> out) {
      std::copy(v.begin(), v.end(), out.begin());
    };
  };
  x.alpha = copy(std::move(alpha));
  x.eta = copy(std::move(eta));
  x.beta = copy(std::move(beta));
  return x;
}

double ito_residual(const ItoFunction& phi, const ItoIngredients& x, const SamplePath& path) {
  const std::size_t n = x.state_dim, d = x.noise_dim;
  if (path.dim() != d) throw DimensionError("path dimension differs from the ingredient noise dimension");
  if (x.x0.size() != n) throw DimensionError("x0 has the wrong dimension");
  const auto& pp = path.partition();
  const auto& ip = x.partition.points();
  if (std::abs(ip.back() - pp.horizon()) > 1e-12 * std::max(1.0, pp.horizon())) {
    throw PartitionError("ingredient and path horizons differ");
  }
  std::vector<double> alpha(n), eta(n * d * d), beta(n * d), grad(n), hess(n * n), state(x.x0), dx(n);
  double rhs = 0.0;
  for (std::size_t j = 0; j + 1 < ip.size(); ++j) {
    const std::size_t start = pp.index_of(ip[j]);
    const std::size_t stop = pp.index_of(ip[j + 1]);
    const PathPrefix prefix(path, start);
    std::fill(alpha.begin(), alpha.end(), 0.0);
    std::fill(eta.begin(), eta.end(), 0.0);
    std::fill(beta.begin(), beta.end(), 0.0);
    if (x.alpha) x.alpha(j, prefix, alpha);
    if (x.eta) x.eta(j, prefix, eta);
    if (x.beta) x.beta(j, prefix, beta);
    for (std::size_t k = start; k < stop; ++k) {
      const auto db = path.increment(k);
      const double dt = pp.dt(k);
      phi.gradient(state, grad);
      phi.hessian(state, hess);
      for (std::size_t nu = 0; nu < n; ++nu) {
        double v = alpha[nu] * dt;
        for (std::size_t jj = 0; jj < d; ++jj) v += beta[nu * d + jj] * db[jj];
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t jj = 0; jj < d; ++jj) v += eta[(nu * d + i) * d + jj] * db[i] * db[jj];
        }
        dx[nu] = v;
      }
      // dB and dt parts
      for (std::size_t nu = 0; nu < n; ++nu) {
        double v = alpha[nu] * dt;
        for (std::size_t jj = 0; jj < d; ++jj) v += beta[nu * d + jj] * db[jj];
        rhs += grad[nu] * v;
      }
      // d<B^i, B^j> part
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t jj = 0; jj < d; ++jj) {
          double coef = 0.0;
          for (std::size_t nu = 0; nu < n; ++nu) coef += grad[nu] * eta[(nu * d + i) * d + jj];
          for (std::size_t mu = 0; mu < n; ++mu) {
            for (std::size_t nu = 0; nu < n; ++nu) {
              coef += 0.5 * hess[mu * n + nu] * beta[mu * d + i] * beta[nu * d + jj];
            }
          }
          rhs += coef * db[i] * db[jj];
        }
      }
      for (std::size_t nu = 0; nu < n; ++nu) state[nu] += dx[nu];
    }
  }
  return phi.value(state) - phi.value(x.x0) - rhs;
}

SamplePath coarsen(const SamplePath& path, std::size_t factor) {
  if (factor == 0 || path.steps() % factor != 0) throw PartitionError("coarsening factor must divide the step count");
  if (factor == 1) return path;
  const std::size_t d = path.dim();
  const std::size_t steps = path.steps() / factor;
  std::vector<double> pts(steps + 1), inc(steps * d, 0.0);
  for (std::size_t k = 0; k <= steps; ++k) pts[k] = path.partition().points()[k * factor];
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t f = 0; f < factor; ++f) {
      const auto db = path.increment(k * factor + f);
      for (std::size_t i = 0; i < d; ++i) inc[k * d + i] += db[i];
    }
  }
  return SamplePath(Partition(std::move(pts)), d, std::move(inc), path.seed(), path.path_index());
}

nlohmann::json ResidualStudy::to_json() const {
  return {{"steps", steps}, {"rms", rms}, {"order", order}, {"order_se", order_se}, {"exact_zero", exact_zero}};
}

ResidualStudy ito_residual_study(const ItoFunction& phi, const ItoIngredients& x, const VolMatrix& gamma,
                                 std::size_t base_steps, std::size_t levels, std::size_t n_paths,
                                 std::uint64_t seed) {
  if (levels < 2 || base_steps == 0 || n_paths < 2) {
    throw DomainError("residual study needs >= 2 levels, >= 1 base step and >= 2 paths");
  }
  const double horizon = x.partition.horizon();
  const std::size_t finest = base_steps << (levels - 1);
  const auto control = ScenarioControl::constant(Partition::uniform(horizon, finest), gamma, "study");
  std::vector<std::vector<double>> sq(levels, std::vector<double>(n_paths));
  double scale = 0.0;
  for (std::size_t p = 0; p < n_paths; ++p) {
    const auto fine = generate_path(control, seed, p);
    for (std::size_t l = 0; l < levels; ++l) {
      const auto view = coarsen(fine, std::size_t{1} << (levels - 1 - l));
      const double r = ito_residual(phi, x, view);
      sq[l][p] = r * r;
    }
    scale = std::max(scale, std::abs(phi.value(fine.terminal())));
  }
  ResidualStudy st;
  std::vector<double> xs(levels), ms(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    st.steps.push_back(base_steps << l);
    double m = 0.0;
    for (double v : sq[l]) m += v;
    ms[l] = m / static_cast<double>(n_paths);
    st.rms.push_back(std::sqrt(ms[l]));
    xs[l] = std::log(horizon / static_cast<double>(base_steps << l));
  }
  const double tiny = 1e-13 * std::max(1.0, scale);
  st.exact_zero = std::all_of(st.rms.begin(), st.rms.end(), [tiny](double r) { return r <= tiny; });
  if (st.exact_zero) return st;

  double xbar = 0.0;
  for (double v : xs) xbar += v;
  xbar /= static_cast<double>(levels);
  double sxx = 0.0;
  for (double v : xs) sxx += (v - xbar) * (v - xbar);
  std::vector<double> w(levels);
  for (std::size_t l = 0; l < levels; ++l) w[l] = (xs[l] - xbar) / sxx;
  for (std::size_t l = 0; l < levels; ++l) st.order += w[l] * std::log(st.rms[l]);
  // delta method: the slope is a smooth function of the per-level means of r^2
  std::vector<double> s(n_paths, 0.0);
  for (std::size_t p = 0; p < n_paths; ++p) {
    for (std::size_t l = 0; l < levels; ++l) {
      if (ms[l] > 0.0) s[p] += w[l] * sq[l][p] / (2.0 * ms[l]);
    }
  }
  st.order_se = mean_stats(s).standard_error;
  return st;
}

ItoFunction ito_function(const std::string& name) {
  using S = std::span<const double>;
  using O = std::span<double>;
  auto zero_hess = [](S x, O h) { std::fill(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(x.size() * x.size()), 0.0); };
  ItoFunction f;
  f.name = name;
  if (name == "linear") {
    f.value = [](S x) { double s = 0; for (double v : x) s += v; return s; };
    f.gradient = [](S x, O g) { for (std::size_t i = 0; i < x.size(); ++i) g[i] = 1.0; };
    f.hessian = zero_hess;
  } else if (name == "square" || name == "cube" || name == "sine" || name == "exp") {
    // separable sums of a scalar function
    std::function<double(double)> v, d1, d2;
    if (name == "square") {
      v = [](double t) { return t * t; };
      d1 = [](double t) { return 2 * t; };
      d2 = [](double) { return 2.0; };
    } else if (name == "cube") {
      v = [](double t) { return t * t * t; };
      d1 = [](double t) { return 3 * t * t; };
      d2 = [](double t) { return 6 * t; };
    } else if (name == "sine") {
      v = [](double t) { return std::sin(t); };
      d1 = [](double t) { return std::cos(t); };
      d2 = [](double t) { return -std::sin(t); };
    } else {
      v = [](double t) { return std::exp(t); };
      d1 = v;
      d2 = v;
    }
    f.value = [v](S x) { double s = 0; for (double t : x) s += v(t); return s; };
    f.gradient = [d1](S x, O g) { for (std::size_t i = 0; i < x.size(); ++i) g[i] = d1(x[i]); };
    f.hessian = [d2](S x, O h) {
      const std::size_t n = x.size();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) h[i * n + j] = i == j ? d2(x[i]) : 0.0;
      }
    };
  } else if (name == "cube_2d") {
    f.value = [](S x) { return x[0] * x[0] * x[0] + x[0] * x[1] * x[1]; };
    f.gradient = [](S x, O g) {
      g[0] = 3 * x[0] * x[0] + x[1] * x[1];
      g[1] = 2 * x[0] * x[1];
    };
    f.hessian = [](S x, O h) {
      h[0] = 6 * x[0];
      h[1] = 2 * x[1];
      h[2] = 2 * x[1];
      h[3] = 2 * x[0];
    };
  } else {
    throw ConfigError("ito.function", "unknown test function '" + name + "'");
  }
  return f;
}

}  // namespace gcalc
