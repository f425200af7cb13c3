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

// Environments, evaluation and short training runs.

#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "ess/agent.hpp"
#include "ess/encoding.hpp"
#include "ess/errors.hpp"
#include "ess/rl.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"

namespace ess {
namespace {

EnvConfig SmallEnv(int K, Units units, const std::string& opponent = "prefix") {
  EnvConfig e;
  e.K = K;
  e.start = StartDistribution::Kind::kRandomSpread;
  e.potential_units = units;
  e.opponent = opponent;
  return e;
}

TrainConfig Short(Algorithm a, std::int64_t steps) {
  TrainConfig c = DefaultTrainConfig(a);
  c.env = SmallEnv(3, 6, "mixed:0.8");
  c.total_steps = steps;
  c.eval_interval = steps / 2;
  c.eval_games = 50;
  c.learning_starts = 100;
  c.rollout_steps = 64;
  c.minibatch_size = 32;
  c.episodes_per_direction = 2;
  c.num_directions = 4;
  c.seed = 17;
  return c;
}

TEST(WilsonTest, KnownValues) {
  const auto [lo, hi] = WilsonInterval(50, 100);
  EXPECT_NEAR(lo, 0.4038, 1e-4);
  EXPECT_NEAR(hi, 0.5962, 1e-4);
  const auto [lo1, hi1] = WilsonInterval(100, 100);
  EXPECT_LT(lo1, 1.0);
  EXPECT_DOUBLE_EQ(hi1, 1.0);
}

TEST(EvaluateTest, NeedsGames) {
  EXPECT_THROW(EvaluateMatches(MakeAttackerPolicy({}), OptimalDefenderPolicy(),
                               {StartDistribution::Kind::kLevel0, 3, 4}, 0, 1,
                               Player::kDefender),
               ValidationError);
}

TEST(EvaluateTest, OptimalDefenderWinsBelowThreshold) {
  for (const char* opp : {"prefix", "disjoint", "mixed:0.8"}) {
    const auto r = EvaluateMatches(ResolveAttacker(opp), OptimalDefenderPolicy(),
                                   {StartDistribution::Kind::kRandomSpread, 5, 31}, 200,
                                   3, Player::kDefender);
    EXPECT_EQ(r.wins, 200) << opp;
  }
}

TEST(EvaluateTest, WorkersDoNotChangeResults) {
  const StartDistribution start{StartDistribution::Kind::kRandomSpread, 4, 15};
  const auto one = EvaluateMatches(ResolveAttacker("mixed:0.8"), RandomDefenderPolicy(),
                                   start, 301, 9, Player::kDefender, 1);
  const auto four = EvaluateMatches(ResolveAttacker("mixed:0.8"), RandomDefenderPolicy(),
                                    start, 301, 9, Player::kDefender, 4);
  EXPECT_EQ(one.wins, four.wins);
}

TEST(EnvTest, DefenderEpisodeRewards) {
  DefenderEnv env(SmallEnv(2, 3), ResolveAttacker("prefix"), 2, false);
  EXPECT_EQ(env.obs_dim(), 6);
  Rng rng(1);
  for (int game = 0; game < 50; ++game) {
    env.Reset(rng);
    for (;;) {
      const int action = OptimalDefenderChoice(env.partition()) == Side::kA ? 0 : 1;
      const StepResult r = env.Step(action, rng);
      if (r.done) {
        EXPECT_EQ(r.reward, 1.0);
        break;
      }
      EXPECT_EQ(r.reward, 0.0);
    }
  }
}

TEST(EnvTest, EmbeddedDefenderObservation) {
  DefenderEnv env(SmallEnv(2, 3), ResolveAttacker("prefix"), 4, false);
  EXPECT_EQ(env.obs_dim(), 10);
  Rng rng(2);
  EXPECT_EQ(env.Reset(rng).size(), 10);
  EXPECT_THROW(DefenderEnv(SmallEnv(4, 3), ResolveAttacker("prefix"), 2, false), ConfigError);
}

TEST(EnvTest, AttackerWinsAboveThreshold) {
  AttackerEnv env(SmallEnv(3, 12), OptimalDefenderPolicy(), false);
  EXPECT_EQ(env.num_actions(), 4);
  Rng rng(3);
  int wins = 0;
  for (int game = 0; game < 50; ++game) {
    nn::Vector obs = env.Reset(rng);
    // Splitting at the lowest occupied level is a weak but legal attack.
    for (int guard = 0; guard < 100; ++guard) {
      int level = 0;
      while (obs[level] == 0) ++level;
      const StepResult r = env.Step(level, rng);
      obs = r.obs;
      if (r.done) {
        EXPECT_EQ(std::abs(r.reward), 1.0);
        wins += r.reward > 0;
        break;
      }
    }
  }
  EXPECT_GT(wins, 0);
  EXPECT_LT(wins, 50);
}

TEST(ResolveTest, UnknownNames) {
  EXPECT_THROW(ResolveDefender("clever"), ConfigError);
  EXPECT_ANY_THROW(ResolveAttacker("nonsense"));
  EXPECT_ANY_THROW(ResolveDefender("policy:/nonexistent.json"));
}

class ShortRunTest : public ::testing::TestWithParam<Algorithm> {};

TEST_P(ShortRunTest, IsDeterministic) {
  const TrainConfig c = Short(GetParam(), 600);
  const TrainedAgent a = Train(c);
  const TrainedAgent b = Train(c);
  EXPECT_EQ(a, b);
  // Random search finishes the episode in progress, so it may run over.
  EXPECT_GE(a.train_curve.back().step, 600);
  EXPECT_LE(a.train_curve.back().step, 620);
  EXPECT_EQ(a.algorithm, AlgorithmName(GetParam()));
  EXPECT_EQ(a.config_hash, ConfigHash(c));
  TrainConfig other = c;
  other.seed = 18;
  EXPECT_FALSE(Train(other).net == a.net);
}

INSTANTIATE_TEST_SUITE_P(AllAlgorithms, ShortRunTest,
                         ::testing::Values(Algorithm::kValueLearner, Algorithm::kPolicyGrad,
                                           Algorithm::kActorCritic, Algorithm::kRandomSearch));

TEST(TrainTest, WrongEntryPointIsAConfigError) {
  EXPECT_THROW(TrainPolicyGrad(Short(Algorithm::kValueLearner, 10)), ConfigError);
  TrainConfig c = Short(Algorithm::kValueLearner, 10);
  EXPECT_THROW(TrainSelfPlay(c), ConfigError);
  c.agent_K = 2;
  EXPECT_THROW(Train(c), ConfigError);
}

TEST(TrainTest, OneLevelBoardLearnsTheOptimalDefence) {
  TrainConfig c = Short(Algorithm::kValueLearner, 3000);
  c.env = SmallEnv(1, 1, "prefix");
  const TrainedAgent a = TrainValueLearner(c);
  EXPECT_DOUBLE_EQ(EvaluateAgent(a, c.env, 200, 5).win_rate, 1.0);
}

TEST(TrainTest, RandomSearchWithoutNoiseLeavesParameters) {
  TrainConfig c = Short(Algorithm::kRandomSearch, 400);
  c.perturb_std = 0.0;
  const TrainedAgent trained = TrainRandomSearch(c);
  TrainConfig none = c;
  none.total_steps = 0;
  EXPECT_EQ(TrainRandomSearch(none).net, trained.net);
}

TEST(TrainTest, RandomSearchBeatsRandomDefence) {
  TrainConfig c = DefaultTrainConfig(Algorithm::kRandomSearch);
  c.env = SmallEnv(3, 6, "mixed:0.8");
  c.total_steps = 30000;
  c.eval_interval = 30000;
  c.eval_games = 50;
  c.seed = 2;
  const TrainedAgent a = TrainRandomSearch(c);
  const double agent = EvaluateAgent(a, c.env, 500, 77).win_rate;
  const double random =
      EvaluateMatches(ResolveAttacker("mixed:0.8"), RandomDefenderPolicy(),
                      c.env.start_distribution(), 500, 77, Player::kDefender)
          .win_rate;
  EXPECT_GT(agent, random + 0.1);
}

TEST(CurriculumTest, PhasesAreValidatedUpFront) {
  const TrainConfig c = Short(Algorithm::kValueLearner, 100);
  std::vector<TrainPhase> phases = {{SmallEnv(3, 6), 100}, {SmallEnv(3, 0), 100}};
  EXPECT_ANY_THROW(TrainCurriculum(c, phases));
  phases[1].env = SmallEnv(2, 3);
  std::vector<std::size_t> seen;
  TrainConfig big = c;
  big.agent_K = 3;
  TrainCurriculum(big, phases, {}, [&](std::size_t i, const TrainedAgent& a) {
    seen.push_back(i);
    EXPECT_EQ(a.K, 3);
  });
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1}));
}

TEST(MultiagentTest, DeterministicAndValidated) {
  TrainConfig att = Short(Algorithm::kValueLearner, 400);
  att.role = Role::kAttacker;
  att.env.opponent = "optimal";
  TrainConfig def = Short(Algorithm::kValueLearner, 400);
  const MultiagentResult a = TrainMultiagent(att, def, 200, 400);
  const MultiagentResult b = TrainMultiagent(att, def, 200, 400);
  EXPECT_EQ(a.attacker, b.attacker);
  EXPECT_EQ(a.defender, b.defender);
  EXPECT_EQ(a.attacker.role, Role::kAttacker);
  ASSERT_EQ(a.attacker.train_curve.size(), a.defender.train_curve.size());
  for (std::size_t i = 0; i < a.defender.train_curve.size(); ++i) {
    EXPECT_DOUBLE_EQ(a.attacker.train_curve[i].win_rate,
                     1.0 - a.defender.train_curve[i].win_rate);
  }
  TrainConfig mismatch = att;
  mismatch.env.K = 4;
  EXPECT_THROW(TrainMultiagent(mismatch, def, 200, 400), ConfigError);
}

TEST(MultiagentTest, SwitchEqualToTotalTrainsDefenderOnly) {
  TrainConfig att = Short(Algorithm::kValueLearner, 300);
  att.role = Role::kAttacker;
  att.env.opponent = "optimal";
  TrainConfig def = Short(Algorithm::kValueLearner, 300);
  const MultiagentResult r = TrainMultiagent(att, def, 300, 300);
  // The attacker never trained, so it equals its seeded initialization.
  const auto fresh = Learner::Create(att, AttackerObsDim(3), AttackerActionDim(3));
  EXPECT_EQ(r.attacker.net, fresh->policy_network());
  EXPECT_EQ(r.defender.train_curve.back().step, 300);
}

TEST(SelfPlayTest, ShortRunProducesComparator) {
  TrainConfig c = Short(Algorithm::kValueLearner, 500);
  c.role = Role::kComparator;
  c.env.opponent = "optimal";
  const TrainedAgent a = TrainSelfPlay(c);
  EXPECT_EQ(a.role, Role::kComparator);
  EXPECT_EQ(a, TrainSelfPlay(c));
  const double acc = ComparatorAccuracy(a, c.env.start_distribution(), 200, 4);
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
}

TEST(SelfPlayTest, ZeroComparatorIsNearChance) {
  TrainedAgent zero;
  zero.net = nn::Network::Zeros(nn::Arch::kMlp2x300, 8, 2);
  zero.role = Role::kComparator;
  zero.K = 3;
  const double acc = ComparatorAccuracy(zero, {StartDistribution::Kind::kRandomSpread, 3, 6},
                                        4000, 5);
  // Ties count as correct, so chance is a little above one half.
  EXPECT_GT(acc, 0.4);
  EXPECT_LT(acc, 0.75);
}

}  // namespace
}  // namespace ess
