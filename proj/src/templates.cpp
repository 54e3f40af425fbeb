#include "gcalc/templates.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gcalc/errors.hpp"

namespace gcalc {

namespace {

using nlohmann::json;

double coord(std::span<const double> x, std::size_t k) { return k == 0 ? 0.0 : x[k - 1]; }

double number(const json& node, const char* key, const std::string& field) {
  if (!node.contains(key) || !node.at(key).is_number()) {
    throw ConfigError(field, std::string("expected numeric '") + key + "'");
  }
  return node.at(key).get<double>();
}

std::size_t index_of(const json& node, const char* key, const std::string& field) {
  if (!node.contains(key) || !node.at(key).is_number_integer() || node.at(key).get<long>() < 0) {
    throw ConfigError(field, std::string("expected non-negative integer '") + key + "'");
  }
  return node.at(key).get<std::size_t>();
}

CompiledTemplate compile(const json& node, const std::string& field);

CompiledTemplate child(const json& node, const std::string& field) {
  if (!node.contains("of")) throw ConfigError(field, "missing operand 'of'");
  return compile(node.at("of"), field + ".of");
}

std::vector<CompiledTemplate> children(const json& node, const char* key, const std::string& field) {
  if (!node.contains(key) || !node.at(key).is_array() || node.at(key).empty()) {
    throw ConfigError(field, std::string("expected non-empty array '") + key + "'");
  }
  std::vector<CompiledTemplate> out;
  std::size_t i = 0;
  for (const auto& e : node.at(key)) {
    out.push_back(compile(e, field + "." + key + "[" + std::to_string(i++) + "]"));
  }
  return out;
}

template <class F>
CompiledTemplate unary(const json& node, const std::string& field, F f) {
  auto c = child(node, field);
  auto inner = c.fn;
  return {[inner, f](std::span<const double> x) { return f(inner(x)); }, c.max_index};
}

CompiledTemplate compile(const json& node, const std::string& field) {
  if (!node.is_object() || !node.contains("op") || !node.at("op").is_string()) {
    throw ConfigError(field, "expression must be an object with a string 'op'");
  }
  const auto op = node.at("op").get<std::string>();

  if (op == "coord") {
    const auto k = index_of(node, "index", field);
    return {[k](std::span<const double> x) { return coord(x, k); }, k};
  }
  if (op == "increment") {
    const auto i = index_of(node, "from", field);
    const auto j = index_of(node, "to", field);
    return {[i, j](std::span<const double> x) { return coord(x, j) - coord(x, i); }, std::max(i, j)};
  }
  if (op == "const") {
    const double c = number(node, "value", field);
    return {[c](std::span<const double>) { return c; }, 0};
  }
  if (op == "sum" || op == "product") {
    auto parts = children(node, op == "sum" ? "terms" : "factors", field);
    std::size_t mx = 0;
    std::vector<CylinderPayoff> fns;
    for (auto& p : parts) {
      mx = std::max(mx, p.max_index);
      fns.push_back(std::move(p.fn));
    }
    if (op == "sum") {
      return {[fns](std::span<const double> x) {
                double s = 0.0;
                for (const auto& f : fns) s += f(x);
                return s;
              },
              mx};
    }
    return {[fns](std::span<const double> x) {
              double s = 1.0;
              for (const auto& f : fns) s *= f(x);
              return s;
            },
            mx};
  }
  if (op == "scale") {
    const double c = number(node, "by", field);
    return unary(node, field, [c](double v) { return c * v; });
  }
  if (op == "neg") return unary(node, field, [](double v) { return -v; });
  if (op == "power") {
    const auto n = index_of(node, "n", field);
    return unary(node, field, [n](double v) {
      double r = 1.0;
      for (std::size_t i = 0; i < n; ++i) r *= v;
      return r;
    });
  }
  if (op == "abs_power") {
    const double p = number(node, "p", field);
    if (!(p > 0.0)) throw ConfigError(field, "abs_power requires p > 0");
    return unary(node, field, [p](double v) { return std::pow(std::abs(v), p); });
  }
  if (op == "poly") {
    if (!node.contains("coefficients") || !node.at("coefficients").is_array() ||
        node.at("coefficients").empty()) {
      throw ConfigError(field, "poly requires a non-empty 'coefficients' array");
    }
    std::vector<double> coeffs;
    for (const auto& c : node.at("coefficients")) {
      if (!c.is_number()) throw ConfigError(field, "poly coefficients must be numbers");
      coeffs.push_back(c.get<double>());
    }
    return unary(node, field, [coeffs](double v) {
      double r = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * v + *it;
      return r;
    });
  }
  if (op == "call") {
    const double k = number(node, "strike", field);
    return unary(node, field, [k](double v) { return std::max(v - k, 0.0); });
  }
  if (op == "put") {
    const double k = number(node, "strike", field);
    return unary(node, field, [k](double v) { return std::max(k - v, 0.0); });
  }
  if (op == "clamp") {
    const double lo = number(node, "lo", field);
    const double hi = number(node, "hi", field);
    if (!(lo <= hi)) throw ConfigError(field, "clamp requires lo <= hi");
    return unary(node, field, [lo, hi](double v) { return std::clamp(v, lo, hi); });
  }
  if (op == "pos") return unary(node, field, [](double v) { return std::max(v, 0.0); });
  if (op == "negpart") return unary(node, field, [](double v) { return std::max(-v, 0.0); });
  if (op == "abs") return unary(node, field, [](double v) { return std::abs(v); });
  if (op == "sin") return unary(node, field, [](double v) { return std::sin(v); });
  if (op == "cos") return unary(node, field, [](double v) { return std::cos(v); });
  if (op == "exp") return unary(node, field, [](double v) { return std::exp(v); });
  if (op == "tanh") return unary(node, field, [](double v) { return std::tanh(v); });

  throw ConfigError(field, "unknown op '" + op + "'");
}

}  // namespace

CompiledTemplate compile_template(const nlohmann::json& expr, const std::string& field) {
  return compile(expr, field);
}

std::function<double(double)> compile_template_1d(const nlohmann::json& expr, const std::string& field) {
  auto c = compile(expr, field);
  if (c.max_index > 1) throw ConfigError(field, "one-argument payoff may only reference coordinate 1");
  auto fn = c.fn;
  return [fn](double x) { return fn(std::span<const double>(&x, 1)); };
}

}  // namespace gcalc
