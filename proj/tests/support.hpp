#pragma once

// Small generators for the property tests. Seeds are fixed so failures replay.

#include <cstdint>
#include <random>
#include <vector>

#include "gcalc/sublinear.hpp"

namespace gtest_support {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  gcalc::SymMatrix sym(std::size_t d, double scale = 2.0) {
    gcalc::SymMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) m.set(i, j, uniform(-scale, scale));
    }
    return m;
  }

  std::vector<double> vec(std::size_t d, double scale = 1.0) {
    std::vector<double> v(d);
    for (auto& x : v) x = uniform(-scale, scale);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gtest_support
