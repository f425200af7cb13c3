// Copyright 2026 The ESS Games Authors.
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

#include <set>

#include <gtest/gtest.h>

#include "ess/errors.hpp"
#include "ess/start_states.hpp"

namespace ess {
namespace {

TEST(UnitsFromPotentialTest, WholeUnitsOnly) {
  EXPECT_EQ(UnitsFromPotential(1.0, 3), 8);
  EXPECT_EQ(UnitsFromPotential(0.9375, 4), 15);
  EXPECT_THROW(UnitsFromPotential(0.95, 5), ConfigError);
  EXPECT_THROW(UnitsFromPotential(-0.5, 5), ConfigError);
}

TEST(SampleStartStateTest, Level0) {
  Rng rng(1);
  EXPECT_EQ(SampleStartState({StartDistribution::Kind::kLevel0, 3, 8}, rng),
            GameState(3, {8, 0, 0, 0}));
}

TEST(SampleStartStateTest, SpreadAtK2CoversTheLiveStates) {
  Rng rng(2);
  std::set<std::vector<Count>> seen;
  for (int i = 0; i < 2000; ++i) {
    seen.insert(SampleStartState({StartDistribution::Kind::kRandomSpread, 2, 4}, rng).counts());
  }
  const std::set<std::vector<Count>> expected = {{4, 0, 0}, {2, 1, 0}, {0, 2, 0}};
  EXPECT_EQ(seen, expected);
}

TEST(SampleStartStateTest, ExactPotentialAndNothingOnTop) {
  Rng rng(3);
  for (auto kind : {StartDistribution::Kind::kLevel0, StartDistribution::Kind::kRandomSpread,
                    StartDistribution::Kind::kSingleLevel}) {
    for (int K = 1; K <= 12; ++K) {
      for (int i = 0; i < 100; ++i) {
        const Units u = 1 + static_cast<Units>(UniformIndex(rng, 2 * UnitOne(K)));
        const GameState s = SampleStartState({kind, K, u}, rng);
        EXPECT_EQ(Potential(s), u);
        EXPECT_EQ(s[K], 0);
      }
    }
  }
}

TEST(SampleStartStateTest, BadDistributions) {
  Rng rng(4);
  EXPECT_THROW(SampleStartState({StartDistribution::Kind::kLevel0, 3, 0}, rng), ConfigError);
  EXPECT_THROW(SampleStartState({StartDistribution::Kind::kLevel0, 0, 4}, rng), ValidationError);
  EXPECT_THROW(StartDistribution::ParseKind("uniform"), ConfigError);
}

TEST(EnumerateTest, WorkedCounts) {
  EXPECT_EQ(EnumerateStates(2, 4, false).size(), 4u);
  EXPECT_EQ(EnumerateStates(3, 8, false).size(), 10u);
  EXPECT_EQ(EnumerateStates(2, 0, false), std::vector<GameState>{GameState(2)});
  EXPECT_EQ(EnumerateStates(2, 4, true).size(), 3u);
  EXPECT_THROW(EnumerateStates(kMaxEnumerationK + 1, 1, false), ConfigError);
}

TEST(EnumerateTest, StatesAreDistinctAndExact) {
  for (int K = 1; K <= 5; ++K) {
    for (Units u = 0; u <= UnitOne(K); ++u) {
      std::set<std::vector<Count>> seen;
      for (const GameState& s : EnumerateStates(K, u, false)) {
        EXPECT_EQ(Potential(s), u);
        EXPECT_TRUE(seen.insert(s.counts()).second);
      }
    }
  }
}

// Binary partitions: b(0)=1, b(2n+1)=b(2n), b(2n)=b(2n-1)+b(n). Counting
// over levels 0..K caps part sizes at 2^K, which is no cap for targets up
// to 2^K.
std::vector<BigCount> BinaryPartitions(Units n) {
  std::vector<BigCount> b(n + 1);
  b[0] = 1;
  for (Units i = 1; i <= n; ++i) b[i] = i % 2 ? b[i - 1] : b[i - 1] + b[i / 2];
  return b;
}

TEST(CountStatesTest, KnownSequence) {
  const std::vector<long long> expected = {2, 4, 10, 36, 202, 1828, 27338, 692004};
  for (int K = 1; K <= 8; ++K) EXPECT_EQ(CountStates(K, UnitOne(K)), expected[K - 1]) << K;
}

TEST(CountStatesTest, MatchesRecurrence) {
  const int K = 16;
  const auto b = BinaryPartitions(UnitOne(K));
  for (Units u : {Units{0}, Units{1}, Units{1000}, Units{12345}, UnitOne(K)}) {
    EXPECT_EQ(CountStates(K, u), b[u]) << u;
  }
}

TEST(CountStatesTest, AgreesWithEnumeration) {
  for (int K = 1; K <= 6; ++K) {
    for (Units u = 0; u <= UnitOne(K); ++u) {
      EXPECT_EQ(CountStates(K, u), BigCount(EnumerateStates(K, u, false).size()));
    }
  }
}

TEST(CountStatesTest, Limits) {
  EXPECT_THROW(CountStates(kMaxCountK + 1, 1), ConfigError);
  EXPECT_THROW(CountStates(5, kMaxCountUnits + 1), ArithmeticBoundError);
  EXPECT_THROW(CountStates(5, -1), ValidationError);
}

}  // namespace
}  // namespace ess
