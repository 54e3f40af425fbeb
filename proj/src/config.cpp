#include "gcalc/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gcalc/errors.hpp"
#include "gcalc/templates.hpp"

extern char** environ;

namespace gcalc {

namespace {

using nlohmann::json;

// Reads known keys of one section and rejects the rest.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = doc.at(name_);
      if (!node_.is_object()) throw ConfigError(name_, "section must be an object");
    } else {
      node_ = json::object();
    }
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  void read_count(const char* key, std::size_t& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    const auto& v = node_.at(key);
    if (v.is_number_integer() && v.get<long long>() >= 0) {
      out = v.get<std::size_t>();
    } else if (v.is_number_float() && v.get<double>() >= 0 && v.get<double>() == std::floor(v.get<double>())) {
      out = static_cast<std::size_t>(v.get<double>());
    } else {
      throw ConfigError(field(key), "expected a non-negative integer");
    }
  }

  void read_json(const char* key, json& out) {
    seen_.insert(key);
    if (node_.contains(key)) out = node_.at(key);
  }

  void finish() const {
    for (const auto& [k, v] : node_.items()) {
      if (!seen_.count(k)) throw ConfigError(field(k.c_str()), "unknown key");
    }
  }

  std::string field(const char* key) const { return name_ + "." + key; }
  const json& node() const { return node_; }

 private:
  std::string name_;
  json node_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

}  // namespace

ExpectationConfig Config::expectation() const {
  ExpectationConfig e;
  e.solver = pde;
  e.prefix_points = suite.prefix_points;
  e.inner_points = suite.inner_points;
  return e;
}

nlohmann::json Config::to_json() const {
  json j;
  j["gamma"] = gamma.to_json();
  j["pde"] = pde.to_json();
  j["paths"] = {{"seed", paths.seed},       {"n_paths", paths.n_paths},
                {"steps", paths.steps},     {"horizon", paths.horizon},
                {"ladder_levels", paths.ladder_levels}, {"max_normals", paths.max_normals}};
  j["sde"] = {{"model", sde.model}, {"params", sde.params},         {"horizon", sde.horizon},
              {"steps", sde.steps}, {"n_paths", sde.n_paths},       {"iterations", sde.iterations},
              {"weight", sde.weight}};
  j["suite"] = {{"pde_tolerance", suite.pde_tolerance},
                {"qv_paths", suite.qv_paths},
                {"qv_steps", suite.qv_steps},
                {"identity_paths", suite.identity_paths},
                {"ito_paths", suite.ito_paths},
                {"ito_steps", suite.ito_steps},
                {"residual_paths", suite.residual_paths},
                {"residual_base_steps", suite.residual_base_steps},
                {"residual_levels", suite.residual_levels},
                {"mean_paths", suite.mean_paths},
                {"appendix_paths", suite.appendix_paths},
                {"prefix_points", suite.prefix_points},
                {"inner_points", suite.inner_points},
                {"battery", suite.battery}};
  j["price"] = {{"payoff", price.payoff},
                {"t", price.t},
                {"x", price.x},
                {"direction", price.direction},
                {"lower_bound_paths", price.lower_bound_paths},
                {"lower_bound_steps", price.lower_bound_steps}};
  j["jensen"] = {{"function", jensen.function}, {"coefficients", jensen.coefficients}, {"phi", jensen.phi},
                 {"horizon", jensen.horizon},   {"direction", jensen.direction}};
  j["risk"] = {{"sigma_low", risk.sigma_low}, {"sigma_high", risk.sigma_high}, {"horizon", risk.horizon},
               {"claim", risk.claim},         {"n_paths", risk.n_paths},       {"steps", risk.steps}};
  return j;
}

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration must be an object");
  static const std::set<std::string> kSections{"gamma", "pde", "paths", "sde", "suite", "price", "jensen", "risk"};
  for (const auto& [k, v] : j.items()) {
    if (!kSections.count(k)) throw ConfigError(k, "unknown section");
  }
  Config c;
  if (j.contains("gamma")) c.gamma = UncertaintySet::from_json(j.at("gamma"));
  if (j.contains("pde")) {
    Section s(j, "pde");
    json dummy;
    for (const char* k : {"cfl_factor", "boundary_policy", "radius_multiplier", "grid_points"}) s.read_json(k, dummy);
    s.finish();
    c.pde = SolverConfig::from_json(s.node());
  }
  {
    Section s(j, "paths");
    s.read("seed", c.paths.seed);
    s.read_count("n_paths", c.paths.n_paths);
    s.read_count("steps", c.paths.steps);
    s.read("horizon", c.paths.horizon);
    s.read_count("ladder_levels", c.paths.ladder_levels);
    s.read("max_normals", c.paths.max_normals);
    s.finish();
    require(c.paths.n_paths >= 1, "paths.n_paths", "must be >= 1");
    require(c.paths.steps >= 1, "paths.steps", "must be >= 1");
    require(c.paths.horizon > 0.0, "paths.horizon", "must be > 0");
    require(c.paths.ladder_levels >= 1, "paths.ladder_levels", "must be >= 1");
    require(c.paths.max_normals > 0.0, "paths.max_normals", "must be > 0");
  }
  {
    Section s(j, "sde");
    s.read("model", c.sde.model);
    s.read_json("params", c.sde.params);
    s.read("horizon", c.sde.horizon);
    s.read_count("steps", c.sde.steps);
    s.read_count("n_paths", c.sde.n_paths);
    s.read_count("iterations", c.sde.iterations);
    s.read("weight", c.sde.weight);
    s.finish();
    require(c.sde.params.is_object(), "sde.params", "must be an object");
    require(c.sde.horizon > 0.0, "sde.horizon", "must be > 0");
    require(c.sde.steps >= 1 && c.sde.n_paths >= 1, "sde", "steps and n_paths must be >= 1");
  }
  {
    Section s(j, "suite");
    s.read("pde_tolerance", c.suite.pde_tolerance);
    s.read_count("qv_paths", c.suite.qv_paths);
    s.read_count("qv_steps", c.suite.qv_steps);
    s.read_count("identity_paths", c.suite.identity_paths);
    s.read_count("ito_paths", c.suite.ito_paths);
    s.read_count("ito_steps", c.suite.ito_steps);
    s.read_count("residual_paths", c.suite.residual_paths);
    s.read_count("residual_base_steps", c.suite.residual_base_steps);
    s.read_count("residual_levels", c.suite.residual_levels);
    s.read_count("mean_paths", c.suite.mean_paths);
    s.read_count("appendix_paths", c.suite.appendix_paths);
    s.read_count("prefix_points", c.suite.prefix_points);
    s.read_count("inner_points", c.suite.inner_points);
    s.read_json("battery", c.suite.battery);
    s.finish();
    require(c.suite.pde_tolerance > 0.0, "suite.pde_tolerance", "must be > 0");
    require(c.suite.prefix_points >= 3 && c.suite.inner_points >= 3, "suite", "nested grids need >= 3 points");
    require(c.suite.residual_levels >= 2, "suite.residual_levels", "must be >= 2");
    for (auto* n : {&c.suite.qv_paths, &c.suite.qv_steps, &c.suite.ito_paths, &c.suite.ito_steps,
                    &c.suite.residual_paths, &c.suite.residual_base_steps, &c.suite.mean_paths,
                    &c.suite.appendix_paths}) {
      require(*n >= 2, "suite", "path and step counts must be >= 2");
    }
    if (!c.suite.battery.is_null()) AxiomBattery::from_json(c.suite.battery);
  }
  {
    Section s(j, "price");
    s.read_json("payoff", c.price.payoff);
    s.read("t", c.price.t);
    s.read("x", c.price.x);
    s.read("direction", c.price.direction);
    s.read_count("lower_bound_paths", c.price.lower_bound_paths);
    s.read_count("lower_bound_steps", c.price.lower_bound_steps);
    s.finish();
    compile_template_1d(c.price.payoff, "price.payoff");
    require(c.price.t >= 0.0, "price.t", "must be >= 0");
    require(c.price.x.size() == c.gamma.dim(), "price.x", "must have the dimension of gamma");
    require(c.price.direction.size() == c.gamma.dim(), "price.direction", "must have the dimension of gamma");
    require(c.price.lower_bound_steps >= 1, "price.lower_bound_steps", "must be >= 1");
  }
  {
    Section s(j, "jensen");
    s.read("function", c.jensen.function);
    s.read("coefficients", c.jensen.coefficients);
    s.read_json("phi", c.jensen.phi);
    s.read("horizon", c.jensen.horizon);
    s.read("direction", c.jensen.direction);
    s.finish();
    compile_template_1d(c.jensen.phi, "jensen.phi");
    require(c.jensen.horizon > 0.0, "jensen.horizon", "must be > 0");
    require(c.jensen.direction.size() == c.gamma.dim(), "jensen.direction", "must have the dimension of gamma");
  }
  {
    Section s(j, "risk");
    s.read("sigma_low", c.risk.sigma_low);
    s.read("sigma_high", c.risk.sigma_high);
    s.read("horizon", c.risk.horizon);
    s.read("claim", c.risk.claim);
    s.read_count("n_paths", c.risk.n_paths);
    s.read_count("steps", c.risk.steps);
    s.finish();
    require(c.risk.sigma_low >= 0.0 && c.risk.sigma_low < 0.5, "risk.sigma_low", "must lie in [0, 0.5)");
    require(c.risk.sigma_high >= 1.0, "risk.sigma_high", "must be >= 1");
    require(c.risk.horizon >= 0.0, "risk.horizon", "must be >= 0");
    require(c.risk.claim == "qv" || c.risk.claim == "neg_qv", "risk.claim", "must be 'qv' or 'neg_qv'");
    require(c.risk.n_paths >= 2 && c.risk.steps >= 1, "risk", "n_paths must be >= 2 and steps >= 1");
  }
  return c;
}

nlohmann::json Config::parse_document(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin, std::string("parse error: ") + e.what());
  }
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(parse_document(ss.str(), path));
}

void apply_env_overrides(nlohmann::json& doc, const std::map<std::string, std::string>& env) {
  if (!doc.is_object()) doc = json::object();
  auto parse_value = [](const std::string& raw) {
    try {
      return json::parse(raw);
    } catch (const json::exception&) {
      return json(raw);
    }
  };
  auto set = [&](const std::string& section, const std::string& key, const std::string& raw,
                 const std::string& var) {
    if (!doc.contains(section)) doc[section] = json::object();
    if (!doc[section].is_object()) throw ConfigError(var, "cannot override inside a non-object section");
    doc[section][key] = parse_value(raw);
  };
  for (const auto& [name, raw] : env) {
    if (name == "GCALC_SEED") {
      set("paths", "seed", raw, name);
    } else if (name == "GCALC_PATHS") {
      set("paths", "n_paths", raw, name);
    } else if (name == "GCALC_GRID_POINTS") {
      set("pde", "grid_points", raw, name);
    } else if (name.rfind("GCALC_", 0) == 0) {
      const auto rest = name.substr(6);
      const auto sep = rest.find("__");
      if (sep == std::string::npos) continue;  // GCALC_CONFIG, GCALC_OUT, ... are handled by the CLI
      std::string section = rest.substr(0, sep), key = rest.substr(sep + 2);
      for (auto& ch : section) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (section.empty() || key.empty()) throw ConfigError(name, "malformed override variable");
      set(section, key, raw, name);
    }
  }
}

std::map<std::string, std::string> gcalc_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string kv(*e);
    if (kv.rfind("GCALC_", 0) != 0) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

}  // namespace gcalc
