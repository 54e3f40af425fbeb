// gcalc: command-line front end. Reports go to stdout, or with --out to
// DIR/report.{json,csv} next to DIR/manifest.json.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gcalc/config.hpp"
#include "gcalc/errors.hpp"
#include "gcalc/gheat.hpp"
#include "gcalc/gnormal.hpp"
#include "gcalc/jensen.hpp"
#include "gcalc/manifest.hpp"
#include "gcalc/pathspace.hpp"
#include "gcalc/sde.hpp"
#include "gcalc/suites.hpp"
#include "gcalc/templates.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gcalc;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kConfigError = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> grid_points;
  std::string out_dir;
  std::string format = "json";
  std::string suite;
};

struct Output {
  json report;
  std::string csv;  // empty: no tabular form
  bool passed = true;
};

Config build_config(const Options& o) {
  json doc = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("--config", "cannot open '" + o.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    doc = Config::parse_document(ss.str(), o.config_path);
    if (!doc.is_object()) throw ConfigError(o.config_path, "configuration must be an object");
  }
  apply_env_overrides(doc, gcalc_environment());
  if (o.seed) doc["paths"]["seed"] = *o.seed;
  if (o.paths) doc["paths"]["n_paths"] = *o.paths;
  if (o.grid_points) doc["pde"]["grid_points"] = *o.grid_points;
  return Config::from_json(doc);
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string key_value_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "quantity,value\n";
  for (const auto& [k, v] : rows) out += k + "," + csv_number(v) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

Output cmd_price(const Config& cfg) {
  const auto& pc = cfg.price;
  const auto payoff = compile_template_1d(pc.payoff, "price.payoff");
  const Direction a(pc.direction);
  const double ax = a.dot(pc.x);
  Output out;
  json& r = out.report;
  r["command"] = "price";
  r["t"] = pc.t;
  r["x"] = pc.x;
  if (pc.t == 0.0) {
    r["value"] = payoff(ax);
  } else {
    const auto dv = directional_variance(cfg.gamma, a);
    const auto sol = solve_gheat_1d(dv.plus, dv.minus, payoff, pc.t, cfg.pde, ax);
    r["value"] = evaluate_pt(cfg.gamma, a, payoff, pc.t, pc.x, cfg.pde);
    r["diagnostics"] = sol.diagnostics.to_json();
    r["diagnostics"]["sigma_plus"] = dv.plus;
    r["diagnostics"]["sigma_minus"] = dv.minus;
  }
  std::vector<std::pair<std::string, double>> rows{{"value", r["value"].get<double>()}};
  if (pc.lower_bound_paths > 0 && pc.t > 0.0) {
    const auto part = Partition::uniform(pc.t, pc.lower_bound_steps);
    const auto controls = volatility_ladder(cfg.gamma, part, cfg.paths.ladder_levels);
    const PathFunctional x = [&](const SamplePath& p) { return payoff(ax + a.dot(p.position(p.steps()))); };
    const auto lb = scenario_sup_expect(x, cfg.gamma, controls, pc.lower_bound_paths, cfg.paths.seed,
                                        {cfg.paths.max_normals});
    r["lower_bound"] = lb.to_json();
    r["gap"] = r["value"].get<double>() - lb.value;
    rows.push_back({"lower_bound", lb.value});
    rows.push_back({"lower_bound_se", lb.standard_error});
    rows.push_back({"gap", r["gap"].get<double>()});
  }
  out.csv = key_value_csv(rows);
  return out;
}

Output cmd_moments(const Config& cfg) {
  const Direction a(cfg.price.direction);
  const double t = cfg.price.t > 0.0 ? cfg.price.t : 1.0;
  const auto params = GNormalParams::from(cfg.gamma, a, t);
  const std::vector<double> x0(cfg.gamma.dim(), 0.0);
  Output out;
  out.csv = "n,kind,closed_form,pde_value,abs_error\n";
  json rows = json::array();
  auto add = [&](int n, const std::string& kind, double closed, const Payoff1D& f) {
    const double v = evaluate_pt(cfg.gamma, a, f, t, x0, cfg.pde);
    const double err = std::abs(v - closed);
    out.passed = out.passed && err <= cfg.suite.pde_tolerance;
    rows.push_back({{"n", n}, {"kind", kind}, {"closed_form", closed}, {"pde_value", v}, {"abs_error", err}});
    out.csv += std::to_string(n) + "," + kind + "," + csv_number(closed) + "," + csv_number(v) + "," +
               csv_number(err) + "\n";
  };
  for (int n = 1; n <= 4; ++n) {
    add(n, "abs", moment_abs(params, n), [n](double x) { return std::pow(std::abs(x), n); });
    if (n % 2 == 0) {
      add(n, "upper", moment_even_signed(params, n, 1), [n](double x) { return std::pow(x, n); });
      add(n, "lower", moment_even_signed(params, n, -1), [n](double x) { return -std::pow(x, n); });
    }
  }
  out.report = {{"command", "moments"}, {"t", t}, {"tolerance", cfg.suite.pde_tolerance}, {"rows", rows},
                {"passed", out.passed}};
  return out;
}

Output cmd_qv(const Config& cfg) {
  const Direction a(cfg.price.direction);
  const auto part = Partition::uniform(cfg.paths.horizon, cfg.paths.steps);
  const auto controls = volatility_ladder(cfg.gamma, part, cfg.paths.ladder_levels);
  const PathFunctional qv = [&a](const SamplePath& p) { return quadratic_variation(p, a).back(); };
  const auto ens = simulate_family(qv, controls, cfg.paths.n_paths, cfg.paths.seed, {cfg.paths.max_normals});
  const auto dv = directional_variance(cfg.gamma, a);
  const double T = cfg.paths.horizon;

  Output out;
  out.csv = "control,expected,mean,standard_error,within_3se\n";
  json rows = json::array();
  for (std::size_t c = 0; c < controls.size(); ++c) {
    // Under a constant control <B^a>_T has mean |g^T a|^2 T, on every partition.
    const auto& g = controls[c].matrices.front();
    std::vector<double> ga(g.dim(), 0.0);
    for (std::size_t j = 0; j < g.dim(); ++j) {
      for (std::size_t i = 0; i < g.dim(); ++i) ga[j] += g(i, j) * a[i];
    }
    double expected = 0.0;
    for (double v : ga) expected += v * v * T;
    const auto st = mean_stats(ens[c].values);
    const bool ok = std::abs(st.mean - expected) <= 3.0 * st.standard_error + 1e-12;
    out.passed = out.passed && ok;
    rows.push_back({{"control", controls[c].label},
                    {"expected", expected},
                    {"mean", st.mean},
                    {"standard_error", st.standard_error},
                    {"within_3se", ok}});
    out.csv += controls[c].label + "," + csv_number(expected) + "," + csv_number(st.mean) + "," +
               csv_number(st.standard_error) + "," + (ok ? "true" : "false") + "\n";
  }
  const auto sup = sup_mean(ens);
  const auto inf = sup_mean(ens, [](double v) { return -v; });
  out.report = {{"command", "qv"},
                {"horizon", T},
                {"steps", cfg.paths.steps},
                {"paths", cfg.paths.n_paths},
                {"controls", rows},
                {"scenario_upper", sup.value},
                {"scenario_lower", -inf.value},
                {"g_upper", dv.plus * T},
                {"g_lower", -dv.minus * T},
                {"passed", out.passed}};
  return out;
}

Output cmd_sde(const Config& cfg) {
  const auto spec = make_sde(cfg.sde.model, cfg.sde.params);
  const auto part = Partition::uniform(cfg.sde.horizon, cfg.sde.steps);
  const auto controls = volatility_ladder(cfg.gamma, part, cfg.paths.ladder_levels);
  PicardConfig pc;
  pc.iterations = cfg.sde.iterations;
  pc.n_paths = cfg.sde.n_paths;
  pc.seed = cfg.paths.seed;
  pc.weight = cfg.sde.weight;
  const auto rep = picard_contraction(spec, cfg.gamma, controls, pc);

  const PathFunctional xt = [&spec](const SamplePath& p) { return euler_solve(spec, p).at(p.steps())[0]; };
  const auto sup = scenario_sup_expect(xt, cfg.gamma, controls, cfg.sde.n_paths, cfg.paths.seed,
                                       {cfg.paths.max_normals});
  Output out;
  out.passed = rep.max_ratio <= 0.6 && rep.fixed_point_converged && rep.fixed_point_residual < 1e-6;
  out.report = {{"command", "sde"},
                {"model", cfg.sde.model},
                {"params", cfg.sde.params},
                {"picard", rep.to_json()},
                {"terminal_mean", sup.to_json()},
                {"passed", out.passed}};
  // Tabular form: the Euler solution on path 0 of the first control.
  out.csv = euler_solve(spec, generate_path(controls.front(), cfg.paths.seed, 0)).to_csv();
  return out;
}

Output cmd_jensen(const Config& cfg) {
  const auto& jc = cfg.jensen;
  const auto h = scalar_function(jc.function, jc.coefficients);
  const auto phi = compile_template_1d(jc.phi, "jensen.phi");
  const Direction a(jc.direction);
  const auto conv = is_g_convex(h, cfg.gamma, default_probes(cfg.gamma, {}, {a}));
  const auto rep = jensen_check(h, phi, cfg.gamma, a, jc.horizon, cfg.expectation());
  Output out;
  // Only a G-convex h promises Delta >= 0; otherwise the numbers are informational.
  out.passed = !conv.g_convex || (rep.delta >= -5e-3 && rep.conditional_min >= -5e-3);
  out.report = {{"command", "jensen"},
                {"function", jc.function},
                {"convexity", conv.to_json()},
                {"jensen", rep.to_json()},
                {"passed", out.passed}};
  out.csv = key_value_csv({{"g_convex", conv.g_convex ? 1.0 : 0.0},
                           {"convexity_min", conv.min_value},
                           {"expect_h_phi", rep.expect_h_phi},
                           {"expect_phi", rep.expect_phi},
                           {"delta", rep.delta},
                           {"conditional_min", rep.conditional_min}});
  return out;
}

std::string suite_csv(const SuiteReport& rep) {
  std::string out = "check,part,measured,relation,bound,passed\n";
  for (const auto& c : rep.checks) {
    if (!c.error.empty()) out += c.id + ",error,,,,false\n";
    for (const auto& m : c.parts) {
      out += c.id + ",\"" + m.name + "\"," + (m.timing ? "" : csv_number(m.measured)) + "," +
             (m.at_most ? "<=" : ">=") + "," + csv_number(m.bound) + "," + (m.passed() ? "true" : "false") + "\n";
    }
  }
  return out;
}

Output from_suite(const SuiteReport& rep, const std::string& command) {
  Output out;
  out.passed = rep.passed();
  out.report = rep.to_json();
  out.report["command"] = command;
  out.csv = suite_csv(rep);
  for (const auto& c : rep.checks) std::cerr << c.summary_line() << '\n';
  return out;
}

Output cmd_risk_demo(const Config& cfg) {
  SuiteReport rep;
  rep.suite = "risk-demo";
  rep.checks.push_back(run_check("risk_demo", cfg));
  return from_suite(rep, "risk-demo");
}

// ---------------------------------------------------------------------------

int emit(const Output& out, const Options& o, const Config& cfg, const std::string& command,
         const std::vector<std::string>& argv, double wall) {
  const bool csv = o.format == "csv" && !out.csv.empty();
  const std::string body = csv ? out.csv : out.report.dump(2) + "\n";
  if (o.out_dir.empty()) {
    std::cout << body;
  } else {
    fs::create_directories(o.out_dir);
    const fs::path file = fs::path(o.out_dir) / (csv ? "report.csv" : "report.json");
    {
      std::ofstream f(file);
      if (!f) throw Error("cannot write " + file.string());
      f << body;
    }
    RunManifest m;
    m.command = command;
    m.argv = argv;
    m.config = cfg.to_json();
    m.seeds = {cfg.paths.seed};
    m.wall_time_seconds = wall;
    m.add_output(file, o.out_dir);
    m.write(fs::path(o.out_dir) / "manifest.json");
    std::cout << file.string() << '\n';
  }
  return out.passed ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"G-expectation calculus toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "Configuration file (JSON, comments allowed)");
  app.add_option("--seed", o.seed, "Override paths.seed");
  app.add_option("--paths", o.paths, "Override paths.n_paths")->check(CLI::PositiveNumber);
  app.add_option("--grid-points", o.grid_points, "Override pde.grid_points")->check(CLI::Range(3, 1000000));
  app.add_option("--out", o.out_dir, "Directory for report and manifest.json");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  // Global flags are also accepted after the subcommand (set before subcommands are created).
  app.fallthrough();
  std::vector<CLI::App*> subs;
  for (const char* name : {"price", "moments", "qv", "sde", "jensen", "risk-demo"}) {
    subs.push_back(app.add_subcommand(name));
  }
  subs[0]->description("G-expectation of a single-time payoff (price section)");
  subs[1]->description("PDE moments against closed forms (CSV: n,kind,closed_form,pde_value,abs_error)");
  subs[2]->description("Quadratic variation along the volatility ladder");
  subs[3]->description("Picard contraction and Euler paths for the sde section");
  subs[4]->description("G-convexity verdict and Jensen gap (jensen section)");
  subs[5]->description("Two traders against the supervisor's bounds (risk section)");
  auto* suite = app.add_subcommand("suite", "Run a check battery: acceptance, axioms, calculus, sde, jensen");
  suite->add_option("name", o.suite, "Suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  std::string command;
  for (auto* s : app.get_subcommands()) command = s->get_name();

  Config cfg;
  try {
    cfg = build_config(o);
    if (command == "suite") suite_check_ids(o.suite);  // reject unknown names before running
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    Output out;
    if (command == "price") out = cmd_price(cfg);
    else if (command == "moments") out = cmd_moments(cfg);
    else if (command == "qv") out = cmd_qv(cfg);
    else if (command == "sde") out = cmd_sde(cfg);
    else if (command == "jensen") out = cmd_jensen(cfg);
    else if (command == "risk-demo") out = cmd_risk_demo(cfg);
    else out = from_suite(run_suite(o.suite, cfg), "suite " + o.suite);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(out, o, cfg, command == "suite" ? "suite " + o.suite : command, args, wall);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}
