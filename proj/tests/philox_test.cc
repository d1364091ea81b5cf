/*
 * Copyright 2026 The Overfit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "overfit/philox.h"

#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace overfit {
namespace {

// Known-answer vectors published with the Random123 library (kat_vectors).
TEST(Philox4x32, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}),
            (PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

static_assert(std::uniform_random_bit_generator<RandomStream>);

TEST(RandomStream, ReproducibleAndDistinct) {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  RandomStream other_stream(42, 8);
  RandomStream other_seed(43, 7);
  int same_stream = 0;
  int same_seed = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    ASSERT_EQ(x, b());
    same_stream += x == other_stream();
    same_seed += x == other_seed();
  }
  EXPECT_EQ(same_stream, 0);
  EXPECT_EQ(same_seed, 0);
}

TEST(RandomStream, UniformMoments) {
  RandomStream s(1, 0);
  constexpr int kDraws = 200000;
  double sum = 0;
  double sum_sq = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / kDraws;
  const double var = sum_sq / kDraws - mean * mean;
  // Standard errors: sqrt(1/12 / n) ~ 6.5e-4 for the mean.
  EXPECT_NEAR(mean, 0.5, 4e-3);
  EXPECT_NEAR(var, 1.0 / 12.0, 2e-3);
}

TEST(RandomStream, BelowIsUniform) {
  RandomStream s(5, 3);
  constexpr int kN = 7;
  constexpr int kDraws = 70000;
  std::vector<int> counts(kN, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto v = s.below(kN);
    ASSERT_LT(v, static_cast<std::uint64_t>(kN));
    ++counts[v];
  }
  // Each count ~ Binomial(70000, 1/7): sd ~ 92.6; allow 5 sd.
  for (int c : counts) EXPECT_NEAR(c, kDraws / kN, 470);
}

}  // namespace
}  // namespace overfit
