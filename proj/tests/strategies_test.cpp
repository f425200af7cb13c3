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

#include <gtest/gtest.h>

#include "ess/errors.hpp"
#include "ess/strategies.hpp"
#include "generators.hpp"

namespace ess {
namespace {

Units MinSide(const Partition& p) {
  return std::min(Potential(p, Side::kA), Potential(p, Side::kB));
}

TEST(OptimalDefenderTest, Examples) {
  EXPECT_EQ(OptimalDefenderChoice({{0, 1, 0}, {1, 0, 0}}), Side::kA);
  EXPECT_EQ(OptimalDefenderChoice({{2, 0, 0}, {0, 1, 0}}), Side::kA);
  EXPECT_EQ(OptimalDefenderChoice({{0, 0, 0, 0}, {1, 0, 0, 0}}), Side::kB);
}

TEST(PrefixAttackerTest, Examples) {
  EXPECT_EQ(PrefixAttackerPartition(GameState(2, {0, 4, 0})),
            (Partition{{0, 2, 0}, {0, 2, 0}}));
  EXPECT_EQ(PrefixAttackerPartition(GameState(2, {2, 1, 0})),
            (Partition{{0, 1, 0}, {2, 0, 0}}));
  EXPECT_EQ(PrefixAttackerPartition(GameState(3, {1, 0, 0, 0})),
            (Partition{{1, 0, 0, 0}, {0, 0, 0, 0}}));
  EXPECT_THROW(PrefixAttackerPartition(GameState(3)), StateError);
}

// Brute force over every prefix cut, ties to the cut giving A more pieces.
Partition BestPrefixCut(const GameState& s) {
  Units best = -1;
  Partition out;
  for (Count c = 0; c <= s.num_pieces(); ++c) {
    const Partition p = PrefixCut(s, c);
    if (MinSide(p) >= best) {
      best = MinSide(p);
      out = p;
    }
  }
  return out;
}

TEST(PrefixAttackerTest, MatchesBruteForceOverCuts) {
  Rng rng(11);
  for (int i = 0; i < 3000; ++i) {
    const int K = 1 + static_cast<int>(UniformIndex(rng, 10));
    const GameState s = testing::RandomLiveState(rng, K, 1 + UniformIndex(rng, 12));
    EXPECT_EQ(PrefixAttackerPartition(s), BestPrefixCut(s));
  }
}

// With potential at least one, both sides reach one half.
TEST(PrefixAttackerTest, BalancedAboveThreshold) {
  Rng rng(12);
  for (int i = 0; i < 3000; ++i) {
    const int K = 2 + static_cast<int>(UniformIndex(rng, 10));
    const Units u = UnitOne(K) + static_cast<Units>(UniformIndex(rng, UnitOne(K) + 1));
    const GameState s = testing::RandomStateWithUnits(rng, K, u);
    EXPECT_GE(MinSide(PrefixAttackerPartition(s)), UnitHalf(K));
  }
}

// Exhaustive check over every split, not only prefix cuts.
TEST(PrefixAttackerTest, NoSplitDoesBetterOnSmallStates) {
  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    const int K = 1 + static_cast<int>(UniformIndex(rng, 4));
    const GameState s = testing::RandomLiveState(rng, K, 3);
    Units best_any = -1;
    testing::ForEachPartition(s, [&](const Partition& p) { best_any = std::max(best_any, MinSide(p)); });
    const Units prefix = MinSide(PrefixAttackerPartition(s));
    EXPECT_LE(prefix, best_any);
    if (Potential(s) >= UnitOne(K)) EXPECT_GE(prefix, UnitHalf(K));
  }
}

TEST(PrefixCutTest, TakesFromTheTop) {
  const GameState s(3, {1, 2, 1, 0});
  EXPECT_EQ(PrefixCut(s, 0), (Partition{{0, 0, 0, 0}, {1, 2, 1, 0}}));
  EXPECT_EQ(PrefixCut(s, 2), (Partition{{0, 1, 1, 0}, {1, 1, 0, 0}}));
  EXPECT_EQ(PrefixCut(s, 4), (Partition{{1, 2, 1, 0}, {0, 0, 0, 0}}));
  EXPECT_THROW(PrefixCut(s, 5), ValidationError);
}

TEST(DisjointSupportTest, Examples) {
  const Partition p = DisjointSupportPartition(GameState(2, {0, 4, 0}), Fraction{1, 4});
  const Units small = std::min(Potential(p, Side::kA), Potential(p, Side::kB));
  EXPECT_EQ(small, UnitHalf(2));
  EXPECT_EQ(std::min(p.a[1], p.b[1]), 1);
  Rng rng(1);
  EXPECT_THROW(DisjointSupportPartition(GameState(3), rng), StateError);
}

TEST(DisjointSupportTest, SmallSideIsClosestPrefixToTheShare) {
  Rng rng(14);
  for (int i = 0; i < 2000; ++i) {
    const int K = 1 + static_cast<int>(UniformIndex(rng, 8));
    const GameState s = testing::RandomLiveState(rng, K, 6);
    const Fraction f = DefaultFractionMenu()[UniformIndex(rng, 4)];
    const Partition p = DisjointSupportPartition(s, f);
    EXPECT_TRUE(ValidatePartition(s, p).empty());
    // |den*B - num*S| is minimal over all cuts.
    const auto gap = [&](const Partition& q) {
      const __int128 b = Potential(q, Side::kB);
      const __int128 d = b * f.den - static_cast<__int128>(f.num) * Potential(s);
      return d < 0 ? -d : d;
    };
    for (Count c = 0; c <= s.num_pieces(); ++c) EXPECT_LE(gap(p), gap(PrefixCut(s, c)));
  }
}

TEST(DisjointSupportTest, SeededDeterminism) {
  const GameState s(5, {3, 2, 4, 1, 1, 0});
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(DisjointSupportPartition(s, a), DisjointSupportPartition(s, b));
}

TEST(MixedAttackerTest, Extremes) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const GameState s = testing::RandomLiveState(rng, 5, 5);
    EXPECT_EQ(MixedAttackerPartition(s, rng, 1.0), PrefixAttackerPartition(s));
    Rng r1(i), r2(i);
    const Partition mixed = MixedAttackerPartition(s, r1, 0.0);
    // Same stream consumed the same way: one uniform for the coin.
    UniformUnit(r2);
    EXPECT_EQ(mixed, DisjointSupportPartition(s, r2));
  }
}

TEST(MixedAttackerTest, OptimalRateNearP) {
  // A state where the two attackers always disagree.
  const GameState s(4, {0, 0, 0, 8, 0});
  const Partition opt = PrefixAttackerPartition(s);
  Rng rng(9);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += MixedAttackerPartition(s, rng, 0.8) == opt;
  EXPECT_NEAR(hits / 10000.0, 0.8, 0.02);
}

TEST(RandomDefenderTest, FairAndSeeded) {
  Rng rng(21);
  int a = 0;
  for (int i = 0; i < 10000; ++i) a += RandomDefenderChoice(rng) == Side::kA;
  EXPECT_GE(a / 10000.0, 0.48);
  EXPECT_LE(a / 10000.0, 0.52);
  Rng x(5), y(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(RandomDefenderChoice(x), RandomDefenderChoice(y));
}

TEST(RandomSplitTest, AlwaysValid) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const GameState s = testing::RandomLiveState(rng, 6, 7);
    EXPECT_TRUE(ValidatePartition(s, RandomSplit(s, rng)).empty());
  }
}

TEST(AttackerKindTest, ParsesNames) {
  EXPECT_EQ(AttackerKind::Parse("prefix").kind, AttackerKind::Kind::kPrefix);
  EXPECT_EQ(AttackerKind::Parse("optimal").kind, AttackerKind::Kind::kPrefix);
  EXPECT_EQ(AttackerKind::Parse("disjoint").kind, AttackerKind::Kind::kDisjointSupport);
  const AttackerKind m = AttackerKind::Parse("mixed:0.6");
  EXPECT_EQ(m.kind, AttackerKind::Kind::kMixed);
  EXPECT_DOUBLE_EQ(m.mix_p_optimal, 0.6);
  EXPECT_DOUBLE_EQ(AttackerKind::Parse("mixed").mix_p_optimal, kDefaultMixPOptimal);
  EXPECT_THROW(AttackerKind::Parse("mixed:1.5"), ConfigError);
  EXPECT_THROW(AttackerKind::Parse("greedy"), ConfigError);
}

TEST(FractionTest, ExactDecimals) {
  EXPECT_EQ(ParseFraction("0.25"), (Fraction{1, 4}));
  EXPECT_DOUBLE_EQ(ParseFraction("0.3").value(), 0.3);
  EXPECT_THROW(ParseFraction("abc"), ConfigError);
}

}  // namespace
}  // namespace ess
