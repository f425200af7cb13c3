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

#ifndef ESS_RL_HPP_
#define ESS_RL_HPP_

// Learning environments, evaluation and the training entry points.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ess/agent.hpp"
#include "ess/game.hpp"
#include "ess/nn.hpp"
#include "ess/train_config.hpp"

namespace ess {

// ---------------------------------------------------------------------------
// Environments. Rewards are terminal only: +1 for a win of the learning side,
// -1 for a loss, 0 otherwise.

struct StepResult {
  nn::Vector obs;
  double reward = 0.0;
  bool done = false;
};

class Env {
 public:
  virtual ~Env() = default;
  virtual int obs_dim() const = 0;
  virtual int num_actions() const = 0;
  virtual nn::Vector Reset(Rng& rng) = 0;
  virtual StepResult Step(int action, Rng& rng) = 0;
};

// The learner defends; action 0 destroys A, action 1 destroys B.
class DefenderEnv : public Env {
 public:
  // `agent_K` >= config.K; smaller boards are embedded for the network.
  // Finished episodes are appended to `log` when given.
  DefenderEnv(const EnvConfig& config, AttackerPolicy attacker, int agent_K,
              bool normalize_obs, std::vector<MatchRecord>* log = nullptr);

  int obs_dim() const override;
  int num_actions() const override { return 2; }
  nn::Vector Reset(Rng& rng) override;
  StepResult Step(int action, Rng& rng) override;

  const Partition& partition() const { return partition_; }

 private:
  nn::Vector Propose(Rng& rng);

  EnvConfig config_;
  AttackerPolicy attacker_;
  int agent_K_;
  bool normalize_;
  std::vector<MatchRecord>* log_;
  GameState state_;
  Partition partition_;
  MatchRecord record_;
};

// The learner attacks by choosing a level; see AttackerActionToPartition.
class AttackerEnv : public Env {
 public:
  AttackerEnv(const EnvConfig& config, DefenderPolicy defender, bool normalize_obs);

  int obs_dim() const override;
  int num_actions() const override;
  nn::Vector Reset(Rng& rng) override;
  StepResult Step(int action, Rng& rng) override;

 private:
  EnvConfig config_;
  DefenderPolicy defender_;
  bool normalize_;
  GameState state_;
};

// Scripted opponents by name, or "policy:<agent file>".
AttackerPolicy ResolveAttacker(const std::string& name);
DefenderPolicy ResolveDefender(const std::string& name);

// ---------------------------------------------------------------------------
// Evaluation.

struct EvalResult {
  std::int64_t games = 0;
  std::int64_t wins = 0;
  double win_rate = 0.0;
  double mean_reward = 0.0;
  double wilson_low = 0.0;   // 95% Wilson score interval
  double wilson_high = 0.0;
};

// 95% Wilson score interval for `wins` out of `games`.
std::pair<double, double> WilsonInterval(std::int64_t wins, std::int64_t games);

// Plays n_games; game i draws its start from DeriveSeed(seed, 2i) and runs
// with match seed DeriveSeed(seed, 2i + 1), so results do not depend on the
// number of workers. Wins are counted for `perspective`. Throws
// ValidationError when n_games < 1.
EvalResult EvaluateMatches(const AttackerPolicy& attacker,
                           const DefenderPolicy& defender,
                           const StartDistribution& start, int n_games,
                           std::uint64_t seed, Player perspective,
                           int workers = 1);

// Frozen greedy agent against env.opponent. Defender and comparator agents
// defend; attacker agents attack.
EvalResult EvaluateAgent(const TrainedAgent& agent, const EnvConfig& env,
                         int n_games, std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------------------
// Learners. A learner keeps its parameters, optimizer and buffers across
// Train calls, so one agent can be trained on a sequence of environments.

using StepHook = std::function<void(std::int64_t learner_step)>;

class Learner {
 public:
  virtual ~Learner() = default;

  // Builds the learner for config.algorithm with freshly initialized
  // parameters (seeded by config.seed).
  static std::unique_ptr<Learner> Create(const TrainConfig& config, int obs_dim,
                                         int num_actions);

  // Runs `steps` environment steps; every Train call starts a new episode.
  // `hook` runs after every step.
  virtual void Train(Env& env, std::int64_t steps, Rng& env_rng,
                     const StepHook& hook) = 0;

  // Network used for greedy play.
  virtual const nn::Network& policy_network() const = 0;
  virtual OutputKind output_kind() const = 0;

  std::int64_t steps_done() const { return steps_done_; }
  TrainedAgent Snapshot() const;

 protected:
  explicit Learner(const TrainConfig& config) : config_(config) {}

  TrainConfig config_;
  std::int64_t steps_done_ = 0;
};

struct TrainHooks {
  // Receives every finished training episode (defender roles only).
  std::vector<MatchRecord>* episode_log = nullptr;
};

// Each Train* function is a pure function of its config. The training curve
// holds a frozen-greedy evaluation every eval_interval steps and at the end.
TrainedAgent TrainValueLearner(const TrainConfig& config, const TrainHooks& hooks = {});
TrainedAgent TrainPolicyGrad(const TrainConfig& config, const TrainHooks& hooks = {});
TrainedAgent TrainActorCritic(const TrainConfig& config, const TrainHooks& hooks = {});
TrainedAgent TrainRandomSearch(const TrainConfig& config, const TrainHooks& hooks = {});
// Dispatches on config.algorithm.
TrainedAgent Train(const TrainConfig& config, const TrainHooks& hooks = {});

// Sequential training of one learner over several environments (curricula,
// forgetting runs). Hyperparameters come from `config`; each phase supplies
// the environment and step count. `after_phase` sees a snapshot after each
// phase.
struct TrainPhase {
  EnvConfig env;
  std::int64_t steps = 0;
};
using PhaseCallback = std::function<void(std::size_t phase, const TrainedAgent& agent)>;
TrainedAgent TrainCurriculum(const TrainConfig& config,
                             const std::vector<TrainPhase>& phases,
                             const TrainHooks& hooks = {},
                             const PhaseCallback& after_phase = {});

struct MultiagentResult {
  TrainedAgent attacker;
  TrainedAgent defender;
};

// Alternates which agent trains, starting with the defender, every
// switch_every steps until total_steps steps have been taken overall. The
// frozen agent plays greedily. Both curves are sampled together every
// defender_config.eval_interval steps from matches between the two current
// greedy agents. Throws ConfigError if the environments differ.
MultiagentResult TrainMultiagent(const TrainConfig& attacker_config,
                                 const TrainConfig& defender_config,
                                 std::int64_t switch_every,
                                 std::int64_t total_steps);

// One value-learner network compares sets for both players: the training
// attacker binary-searches with the current network (or, with probability
// selfplay_random_cut, plays a random prefix cut) and the learner defends.
// The curve evaluates the comparator as a defender against env.opponent.
// Requires algorithm = value.
TrainedAgent TrainSelfPlay(const TrainConfig& config, const TrainHooks& hooks = {});

// Share of `n` random partitions on which the comparator names the side of
// strictly larger potential (either answer counts on ties). Partitions split
// each level of a state drawn from `start` uniformly at random.
double ComparatorAccuracy(const TrainedAgent& agent, const StartDistribution& start,
                          int n, std::uint64_t seed);

}  // namespace ess

#endif  // ESS_RL_HPP_
