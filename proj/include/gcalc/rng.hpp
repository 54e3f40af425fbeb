#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is a pure
// function of (key, counter), so any (seed, path, step) can be regenerated directly.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gcalc {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint32_t kM0 = 0xD2511F53U, kM1 = 0xCD9E8D57U;
  constexpr std::uint32_t kW0 = 0x9E3779B9U, kW1 = 0xBB67AE85U;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Four standard normals from one Philox block (two Box-Muller pairs).
inline std::array<double, 4> philox_normals(std::uint64_t seed, std::uint64_t block,
                                            std::uint64_t stream) noexcept {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto r = philox4x32_10(ctr, key);
  // uniforms in (0, 1]; never 0, so the logarithm is finite
  constexpr double kScale = 1.0 / 4294967296.0;
  std::array<double, 4> out{};
  for (int pair = 0; pair < 2; ++pair) {
    const double u1 = (static_cast<double>(r[2 * pair]) + 1.0) * kScale;
    const double u2 = static_cast<double>(r[2 * pair + 1]) * kScale;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    out[2 * pair] = rad * std::cos(ang);
    out[2 * pair + 1] = rad * std::sin(ang);
  }
  return out;
}

}  // namespace gcalc
