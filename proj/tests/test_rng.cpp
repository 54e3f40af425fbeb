#include <gtest/gtest.h>

#include <cmath>

#include "gcalc/rng.hpp"

using namespace gcalc;

// Known-answer vectors of the Random123 distribution for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, NormalsAreDeterministicAndStandard) {
  EXPECT_EQ(philox_normals(7, 3, 9), philox_normals(7, 3, 9));
  EXPECT_NE(philox_normals(7, 3, 9), philox_normals(7, 3, 10));
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  const int blocks = 250000;
  for (int b = 0; b < blocks; ++b) {
    for (double z : philox_normals(42, b, 0)) {
      ASSERT_TRUE(std::isfinite(z));
      s1 += z;
      s2 += z * z;
      s4 += z * z * z * z;
    }
  }
  const double n = 4.0 * blocks;
  // 5-sigma bands for the sample moments.
  EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}
