// Copyright 2026 The Star Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/rng.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

namespace starforge {
namespace {

TEST(RngTest, SameSeedSameSequence) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a.Next();
    EXPECT_EQ(x, b.Next());
    differs |= x != c.Next();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, UniformStaysInRange) {
  Rng rng(7);
  for (uint64_t n : {1ULL, 2ULL, 3ULL, 10ULL, 1000003ULL}) {
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.Uniform(n), n);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.UniformReal();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngTest, SampleWithoutReplacementIsDistinctAndClamped) {
  Rng rng(11);
  for (size_t n = 0; n <= 8; ++n) {
    for (size_t k = 0; k <= n + 2; ++k) {
      const auto s = rng.SampleWithoutReplacement(n, k);
      EXPECT_EQ(s.size(), std::min(n, k));
      EXPECT_EQ(std::set<size_t>(s.begin(), s.end()).size(), s.size());
      for (size_t i : s) EXPECT_LT(i, n);
    }
  }
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> v = {1, 2, 3, 4, 5, 6};
  rng.Shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3, 4, 5, 6}));
}

TEST(DeriveSeedTest, DependsOnEveryPart) {
  const uint64_t base = DeriveSeed(1, {2, 3});
  EXPECT_EQ(base, DeriveSeed(1, {2, 3}));
  EXPECT_NE(base, DeriveSeed(1, {3, 2}));
  EXPECT_NE(base, DeriveSeed(2, {2, 3}));
  EXPECT_NE(base, DeriveSeed(1, {2}));
}

}  // namespace
}  // namespace starforge
