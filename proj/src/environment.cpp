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

#include <algorithm>
#include <cmath>
#include <thread>

#include "ess/embedding.hpp"
#include "ess/encoding.hpp"
#include "ess/errors.hpp"
#include "ess/rl.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"

namespace ess {

DefenderEnv::DefenderEnv(const EnvConfig& config, AttackerPolicy attacker,
                         int agent_K, bool normalize_obs,
                         std::vector<MatchRecord>* log)
    : config_(config),
      attacker_(std::move(attacker)),
      agent_K_(agent_K),
      normalize_(normalize_obs),
      log_(log),
      state_(config.K) {
  config_.Validate();
  CheckLevelCount(agent_K);
  if (agent_K < config.K) {
    throw ConfigError("defender network K=" + std::to_string(agent_K) +
                      " is smaller than the board K=" + std::to_string(config.K));
  }
}

int DefenderEnv::obs_dim() const { return DefenderObsDim(agent_K_); }

nn::Vector DefenderEnv::Propose(Rng& rng) {
  partition_ = attacker_(state_, rng);
  const auto violations = ValidatePartition(state_, partition_);
  if (!violations.empty()) {
    throw RuntimeFailure("training attacker proposed an invalid partition: " +
                         violations.front().reason);
  }
  const Partition& p =
      agent_K_ == config_.K ? partition_ : CrossKEmbed(partition_, agent_K_);
  return ToVector(EncodeDefenderObs(p, normalize_));
}

nn::Vector DefenderEnv::Reset(Rng& rng) {
  state_ = SampleStartState(config_.start_distribution(), rng);
  record_ = MatchRecord{};
  record_.start = state_;
  return Propose(rng);
}

StepResult DefenderEnv::Step(int action, Rng& rng) {
  const Side destroy = action == 0 ? Side::kA : Side::kB;
  GameState next = ApplyMove(state_, partition_, destroy);
  if (log_) record_.steps.push_back({state_, partition_, destroy});
  state_ = std::move(next);
  if (const auto winner = Winner(state_)) {
    if (log_) {
      record_.outcome = {*winner, static_cast<int>(record_.steps.size())};
      log_->push_back(std::move(record_));
      record_ = MatchRecord{};
    }
    return {nn::Vector::Zero(obs_dim()), *winner == Player::kDefender ? 1.0 : -1.0,
            true};
  }
  return {Propose(rng), 0.0, false};
}

AttackerEnv::AttackerEnv(const EnvConfig& config, DefenderPolicy defender,
                         bool normalize_obs)
    : config_(config),
      defender_(std::move(defender)),
      normalize_(normalize_obs),
      state_(config.K) {
  config_.Validate();
}

int AttackerEnv::obs_dim() const { return AttackerObsDim(config_.K); }
int AttackerEnv::num_actions() const { return AttackerActionDim(config_.K); }

nn::Vector AttackerEnv::Reset(Rng& rng) {
  state_ = SampleStartState(config_.start_distribution(), rng);
  return ToVector(EncodeAttackerObs(state_, normalize_));
}

StepResult AttackerEnv::Step(int action, Rng& rng) {
  const Partition p = AttackerActionToPartition(state_, action);
  state_ = ApplyMove(state_, p, defender_(p, rng));
  if (const auto winner = Winner(state_)) {
    return {nn::Vector::Zero(obs_dim()), *winner == Player::kAttacker ? 1.0 : -1.0,
            true};
  }
  return {ToVector(EncodeAttackerObs(state_, normalize_)), 0.0, false};
}

AttackerPolicy ResolveAttacker(const std::string& name) {
  if (name.starts_with("policy:")) {
    return AgentAttackerPolicy(
        std::make_shared<const TrainedAgent>(LoadAgent(name.substr(7))));
  }
  return MakeAttackerPolicy(AttackerKind::Parse(name));
}

DefenderPolicy ResolveDefender(const std::string& name) {
  if (name == "optimal") return OptimalDefenderPolicy();
  if (name == "random") return RandomDefenderPolicy();
  if (name.starts_with("policy:")) {
    return AgentDefenderPolicy(
        std::make_shared<const TrainedAgent>(LoadAgent(name.substr(7))));
  }
  throw ConfigError("unknown defender '" + name + "'");
}

std::pair<double, double> WilsonInterval(std::int64_t wins, std::int64_t games) {
  if (games <= 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(games);
  const double p = wins / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EvalResult EvaluateMatches(const AttackerPolicy& attacker,
                           const DefenderPolicy& defender,
                           const StartDistribution& start, int n_games,
                           std::uint64_t seed, Player perspective, int workers) {
  if (n_games < 1) throw ValidationError("evaluation needs at least one game");
  start.Validate();
  workers = std::clamp(workers, 1, n_games);
  std::vector<char> won(n_games, 0);
  auto run = [&](int worker) {
    for (int i = worker; i < n_games; i += workers) {
      Rng start_rng(DeriveSeed(seed, 2 * static_cast<std::uint64_t>(i)));
      const GameState s0 = SampleStartState(start, start_rng);
      const MatchRecord r =
          PlayMatch(attacker, defender, s0, DeriveSeed(seed, 2 * static_cast<std::uint64_t>(i) + 1));
      won[i] = r.outcome.winner == perspective;
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  EvalResult r;
  r.games = n_games;
  for (char w : won) r.wins += w;
  r.win_rate = static_cast<double>(r.wins) / n_games;
  r.mean_reward = static_cast<double>(2 * r.wins - n_games) / n_games;
  std::tie(r.wilson_low, r.wilson_high) = WilsonInterval(r.wins, r.games);
  return r;
}

EvalResult EvaluateAgent(const TrainedAgent& agent, const EnvConfig& env,
                         int n_games, std::uint64_t seed, int workers) {
  env.Validate();
  auto shared = std::make_shared<const TrainedAgent>(agent);
  if (agent.role == Role::kAttacker) {
    return EvaluateMatches(AgentAttackerPolicy(shared), ResolveDefender(env.opponent),
                           env.start_distribution(), n_games, seed,
                           Player::kAttacker, workers);
  }
  if (env.K > agent.K) {
    throw ConfigError("agent built for K=" + std::to_string(agent.K) +
                      " cannot be tested on larger K=" + std::to_string(env.K));
  }
  return EvaluateMatches(ResolveAttacker(env.opponent), AgentDefenderPolicy(shared),
                         env.start_distribution(), n_games, seed,
                         Player::kDefender, workers);
}

}  // namespace ess
