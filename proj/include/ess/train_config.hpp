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

#ifndef ESS_TRAIN_CONFIG_HPP_
#define ESS_TRAIN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ess/game.hpp"
#include "ess/nn.hpp"
#include "ess/start_states.hpp"

namespace ess {

enum class Algorithm {
  kValueLearner,   // epsilon-greedy Q-learning, replay buffer, target network
  kPolicyGrad,     // clipped-surrogate policy gradient with a value baseline
  kActorCritic,    // synchronous n-step advantage actor-critic
  kRandomSearch,   // finite-difference random search over parameters
};

enum class Role { kDefender, kAttacker, kComparator };

Algorithm ParseAlgorithm(std::string_view name);  // value|policy-grad|actor-critic|random-search
std::string AlgorithmName(Algorithm a);
Role ParseRole(std::string_view name);
std::string RoleName(Role r);

// Where an agent is trained or tested. `opponent` names the other player:
// for a defender "prefix", "disjoint", "mixed[:p]" or "policy:<file>", for an
// attacker "optimal", "random" or "policy:<file>".
struct EnvConfig {
  int K = 5;
  StartDistribution::Kind start = StartDistribution::Kind::kRandomSpread;
  Units potential_units = 30;
  std::string opponent = "mixed:0.8";

  StartDistribution start_distribution() const {
    return {start, K, potential_units};
  }
  void Validate() const;
};

struct TrainConfig {
  Algorithm algorithm = Algorithm::kValueLearner;
  Role role = Role::kDefender;
  nn::Arch arch = nn::Arch::kMlp2x300;
  bool normalize_obs = false;
  std::int64_t total_steps = 200000;
  double learning_rate = 1e-3;
  double discount = 1.0;
  std::uint64_t seed = 1;
  // Network K; 0 means env.K. Larger values embed smaller boards.
  int agent_K = 0;

  // Value learner.
  std::int64_t replay_capacity = 50000;
  int batch_size = 32;
  std::int64_t target_sync_interval = 1000;
  int train_every = 4;
  std::int64_t learning_starts = 1000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.02;
  double epsilon_decay_fraction = 0.3;

  // Policy gradient and actor-critic.
  double clip_ratio = 0.2;
  int epochs_per_batch = 4;
  int rollout_steps = 1024;
  int minibatch_size = 128;
  double entropy_coef = 0.01;
  double value_coef = 0.5;

  // Random search.
  double perturb_std = 0.05;
  int num_directions = 8;
  double top_fraction = 0.5;
  int episodes_per_direction = 10;

  // Self play: chance that the training attacker splits every level
  // uniformly at random instead of running the binary search.
  double selfplay_random_cut = 0.3;

  // Training curve.
  std::int64_t eval_interval = 20000;
  int eval_games = 200;

  EnvConfig env;

  int network_K() const { return agent_K > 0 ? agent_K : env.K; }
  void Validate() const;
};

// Defaults for one algorithm; the values live in src/rl_defaults.cpp.
TrainConfig DefaultTrainConfig(Algorithm algorithm);

nlohmann::json ToJson(const EnvConfig& env);
EnvConfig EnvConfigFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const TrainConfig& config);
// Missing keys take the defaults of the algorithm named in `j`.
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

// Git-style hash of the canonical config plus the fixed project-wide choices
// (nonlinearity, initialization, optimizer).
std::string ConfigHash(const TrainConfig& config);

}  // namespace ess

#endif  // ESS_TRAIN_CONFIG_HPP_
