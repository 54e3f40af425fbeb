#pragma once

// Symbolic payoff templates read from battery and config files.
//
// An expression is a JSON object with an "op" key:
//   {"op": "coord", "index": k}                 x^k, k >= 1 (k = 0 is B_0 = 0)
//   {"op": "increment", "from": i, "to": j}     x^j - x^i
//   {"op": "const", "value": c}
//   {"op": "sum", "terms": [e, ...]}            {"op": "product", "factors": [e, ...]}
//   {"op": "scale", "by": c, "of": e}           {"op": "neg", "of": e}
//   {"op": "power", "of": e, "n": k}            integer power
//   {"op": "abs_power", "of": e, "p": r}        |e|^r
//   {"op": "poly", "of": e, "coefficients": [c0, c1, ...]}
//   {"op": "call", "of": e, "strike": K}        max(e - K, 0)
//   {"op": "put", "of": e, "strike": K}         max(K - e, 0)
//   {"op": "pos" | "negpart" | "sin" | "cos" | "exp" | "tanh" | "abs", "of": e}
//   {"op": "clamp", "of": e, "lo": a, "hi": b}

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "json.hpp"

namespace gcalc {

using CylinderPayoff = std::function<double(std::span<const double>)>;

struct CompiledTemplate {
  CylinderPayoff fn;
  std::size_t max_index = 0;  ///< largest coordinate referenced
};

/// Throws ConfigError naming `field` on an unknown op or a malformed node.
CompiledTemplate compile_template(const nlohmann::json& expr, const std::string& field = "payoff");

/// One-argument convenience: coordinates must be 0 or 1.
std::function<double(double)> compile_template_1d(const nlohmann::json& expr,
                                                  const std::string& field = "payoff");

}  // namespace gcalc
