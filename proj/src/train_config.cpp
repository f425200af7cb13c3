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

#include "ess/train_config.hpp"

#include "ess/errors.hpp"
#include "ess/hash.hpp"

namespace ess {

using nlohmann::json;

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "value" || name == "value-learner") return Algorithm::kValueLearner;
  if (name == "policy-grad") return Algorithm::kPolicyGrad;
  if (name == "actor-critic") return Algorithm::kActorCritic;
  if (name == "random-search") return Algorithm::kRandomSearch;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kValueLearner:
      return "value";
    case Algorithm::kPolicyGrad:
      return "policy-grad";
    case Algorithm::kActorCritic:
      return "actor-critic";
    case Algorithm::kRandomSearch:
      return "random-search";
  }
  return "?";
}

Role ParseRole(std::string_view name) {
  if (name == "defender") return Role::kDefender;
  if (name == "attacker") return Role::kAttacker;
  if (name == "comparator") return Role::kComparator;
  throw ConfigError("unknown role '" + std::string(name) + "'");
}

std::string RoleName(Role r) {
  switch (r) {
    case Role::kDefender:
      return "defender";
    case Role::kAttacker:
      return "attacker";
    case Role::kComparator:
      return "comparator";
  }
  return "?";
}

void EnvConfig::Validate() const {
  start_distribution().Validate();
  if (opponent.empty()) throw ConfigError("env needs an opponent");
}

void TrainConfig::Validate() const {
  env.Validate();
  if (agent_K != 0) {
    CheckLevelCount(agent_K);
    if (agent_K < env.K) {
      throw ConfigError("agent_K must be at least the environment's K");
    }
    if (role == Role::kAttacker && agent_K != env.K) {
      throw ConfigError("attacker agents cannot be embedded across K");
    }
  }
  auto positive = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(total_steps >= 0, "total_steps");
  positive(learning_rate > 0, "learning_rate");
  if (!(discount > 0 && discount <= 1)) {
    throw ConfigError("discount must lie in (0, 1]");
  }
  positive(replay_capacity > 0, "replay_capacity");
  positive(batch_size > 0, "batch_size");
  positive(target_sync_interval > 0, "target_sync_interval");
  positive(train_every > 0, "train_every");
  positive(clip_ratio > 0, "clip_ratio");
  positive(epochs_per_batch > 0, "epochs_per_batch");
  positive(rollout_steps > 0, "rollout_steps");
  positive(minibatch_size > 0, "minibatch_size");
  positive(perturb_std >= 0, "perturb_std");
  positive(num_directions > 0, "num_directions");
  positive(top_fraction > 0 && top_fraction <= 1, "top_fraction");
  positive(episodes_per_direction > 0, "episodes_per_direction");
  positive(eval_interval > 0, "eval_interval");
  positive(eval_games > 0, "eval_games");
  if (!(epsilon_start >= 0 && epsilon_start <= 1 && epsilon_end >= 0 &&
        epsilon_end <= 1 && epsilon_decay_fraction > 0)) {
    throw ConfigError("epsilon schedule out of range");
  }
  if (!(selfplay_random_cut >= 0 && selfplay_random_cut <= 1)) {
    throw ConfigError("selfplay_random_cut must lie in [0, 1]");
  }
}

json ToJson(const EnvConfig& env) {
  return json{{"K", env.K},
              {"start", StartDistribution::KindName(env.start)},
              {"potential_units", env.potential_units},
              {"opponent", env.opponent}};
}

EnvConfig EnvConfigFromJson(const json& j) {
  EnvConfig env;
  if (!j.is_object()) throw ConfigError("env must be an object");
  if (j.contains("potential") && j.contains("potential_units")) {
    throw ConfigError("give either potential or potential_units, not both");
  }
  env.K = j.value("K", env.K);
  env.start = StartDistribution::ParseKind(
      j.value("start", StartDistribution::KindName(env.start)));
  if (j.contains("potential")) {
    env.potential_units = UnitsFromPotential(j.at("potential").get<double>(), env.K);
  } else {
    env.potential_units = j.value("potential_units", env.potential_units);
  }
  env.opponent = j.value("opponent", env.opponent);
  for (const auto& [key, _] : j.items()) {
    if (key != "K" && key != "start" && key != "potential" &&
        key != "potential_units" && key != "opponent") {
      throw ConfigError("unknown env key '" + key + "'");
    }
  }
  return env;
}

json ToJson(const TrainConfig& c) {
  return json{{"algorithm", AlgorithmName(c.algorithm)},
              {"role", RoleName(c.role)},
              {"arch", nn::ArchName(c.arch)},
              {"normalize_obs", c.normalize_obs},
              {"total_steps", c.total_steps},
              {"learning_rate", c.learning_rate},
              {"discount", c.discount},
              {"seed", c.seed},
              {"agent_K", c.agent_K},
              {"replay_capacity", c.replay_capacity},
              {"batch_size", c.batch_size},
              {"target_sync_interval", c.target_sync_interval},
              {"train_every", c.train_every},
              {"learning_starts", c.learning_starts},
              {"epsilon_start", c.epsilon_start},
              {"epsilon_end", c.epsilon_end},
              {"epsilon_decay_fraction", c.epsilon_decay_fraction},
              {"clip_ratio", c.clip_ratio},
              {"epochs_per_batch", c.epochs_per_batch},
              {"rollout_steps", c.rollout_steps},
              {"minibatch_size", c.minibatch_size},
              {"entropy_coef", c.entropy_coef},
              {"value_coef", c.value_coef},
              {"perturb_std", c.perturb_std},
              {"num_directions", c.num_directions},
              {"top_fraction", c.top_fraction},
              {"episodes_per_direction", c.episodes_per_direction},
              {"selfplay_random_cut", c.selfplay_random_cut},
              {"eval_interval", c.eval_interval},
              {"eval_games", c.eval_games},
              {"env", ToJson(c.env)}};
}

TrainConfig TrainConfigFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("train config must be an object");
  const Algorithm algo = ParseAlgorithm(j.value("algorithm", std::string("value")));
  TrainConfig c = DefaultTrainConfig(algo);
  const json defaults = ToJson(c);
  for (const auto& [key, _] : j.items()) {
    if (!defaults.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    c.role = ParseRole(j.value("role", RoleName(c.role)));
    c.arch = nn::ParseArch(j.value("arch", nn::ArchName(c.arch)));
    c.normalize_obs = j.value("normalize_obs", c.normalize_obs);
    c.total_steps = j.value("total_steps", c.total_steps);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.discount = j.value("discount", c.discount);
    c.seed = j.value("seed", c.seed);
    c.agent_K = j.value("agent_K", c.agent_K);
    c.replay_capacity = j.value("replay_capacity", c.replay_capacity);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.target_sync_interval = j.value("target_sync_interval", c.target_sync_interval);
    c.train_every = j.value("train_every", c.train_every);
    c.learning_starts = j.value("learning_starts", c.learning_starts);
    c.epsilon_start = j.value("epsilon_start", c.epsilon_start);
    c.epsilon_end = j.value("epsilon_end", c.epsilon_end);
    c.epsilon_decay_fraction = j.value("epsilon_decay_fraction", c.epsilon_decay_fraction);
    c.clip_ratio = j.value("clip_ratio", c.clip_ratio);
    c.epochs_per_batch = j.value("epochs_per_batch", c.epochs_per_batch);
    c.rollout_steps = j.value("rollout_steps", c.rollout_steps);
    c.minibatch_size = j.value("minibatch_size", c.minibatch_size);
    c.entropy_coef = j.value("entropy_coef", c.entropy_coef);
    c.value_coef = j.value("value_coef", c.value_coef);
    c.perturb_std = j.value("perturb_std", c.perturb_std);
    c.num_directions = j.value("num_directions", c.num_directions);
    c.top_fraction = j.value("top_fraction", c.top_fraction);
    c.episodes_per_direction = j.value("episodes_per_direction", c.episodes_per_direction);
    c.selfplay_random_cut = j.value("selfplay_random_cut", c.selfplay_random_cut);
    c.eval_interval = j.value("eval_interval", c.eval_interval);
    c.eval_games = j.value("eval_games", c.eval_games);
    if (j.contains("env")) c.env = EnvConfigFromJson(j.at("env"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad train config: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string ConfigHash(const TrainConfig& config) {
  json j = ToJson(config);
  j["_constants"] = {{"nonlinearity", "relu"},
                     {"init", "he-uniform/glorot-uniform-output"},
                     {"optimizer", "adam(0.9,0.999,1e-8)"},
                     {"hidden_width", nn::kHiddenWidth}};
  return GitBlobHash(j.dump());
}

}  // namespace ess
