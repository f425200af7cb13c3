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
#include <memory>

#include "ess/embedding.hpp"
#include "ess/encoding.hpp"
#include "ess/errors.hpp"
#include "ess/rl.hpp"
#include "ess/self_play.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"

namespace ess {
namespace {

constexpr std::uint64_t kEnvStream = 2;
constexpr std::uint64_t kEvalStream = 3;
constexpr std::uint64_t kSelfPlayStream = 4;

// Greedy policies reading a learner's network as it trains.
DefenderPolicy LiveDefender(const Learner& learner, int agent_K, bool normalize) {
  return [&learner, agent_K, normalize](const Partition& p, Rng& rng) {
    const Partition q = p.K() == agent_K ? p : CrossKEmbed(p, agent_K);
    const nn::Vector scores =
        learner.policy_network().Forward(ToVector(EncodeDefenderObs(q, normalize)));
    return ArgmaxRandomTies(scores, rng) == 0 ? Side::kA : Side::kB;
  };
}

AttackerPolicy LiveAttacker(const Learner& learner, bool normalize) {
  return [&learner, normalize](const GameState& s, Rng& rng) {
    const nn::Vector scores =
        learner.policy_network().Forward(ToVector(EncodeAttackerObs(s, normalize)));
    return AttackerActionToPartition(s, ArgmaxRandomTies(scores, rng));
  };
}

// Evaluates a snapshot every eval_interval steps and once at the end, on
// whichever environment is currently being trained.
class CurveRecorder {
 public:
  CurveRecorder(const TrainConfig& config, const Learner& learner)
      : config_(config), learner_(learner), env_(config.env) {}

  void set_env(const EnvConfig& env) { env_ = env; }

  void operator()(std::int64_t step) {
    if (step % config_.eval_interval == 0) Record(step);
  }

  void Finish() {
    if (curve_.empty() || curve_.back().step != learner_.steps_done()) {
      Record(learner_.steps_done());
    }
  }

  std::vector<CurvePoint> curve() const { return curve_; }

 private:
  void Record(std::int64_t step) {
    const TrainedAgent agent = learner_.Snapshot();
    const EvalResult r = EvaluateAgent(agent, env_, config_.eval_games,
                                       DeriveSeed(config_.seed, kEvalStream));
    curve_.push_back({step, r.win_rate});
  }

  const TrainConfig& config_;
  const Learner& learner_;
  EnvConfig env_;
  std::vector<CurvePoint> curve_;
};

int ObsDim(const TrainConfig& config) {
  return config.role == Role::kAttacker ? AttackerObsDim(config.env.K)
                                        : DefenderObsDim(config.network_K());
}

int NumActions(const TrainConfig& config) {
  return config.role == Role::kAttacker ? AttackerActionDim(config.env.K) : 2;
}

// The self-play attacker: binary search with the learner's own network as
// comparator, or a random split of every level for exploration.
AttackerPolicy SelfPlayAttacker(const TrainConfig& config, const Learner& learner,
                                Rng& cut_rng) {
  const int agent_K = config.network_K();
  const bool normalize = config.normalize_obs;
  const double random_cut = config.selfplay_random_cut;
  return [&learner, &cut_rng, agent_K, normalize, random_cut](const GameState& s,
                                                              Rng& rng) {
    if (Bernoulli(cut_rng, random_cut)) return RandomSplit(s, cut_rng);
    const DefenderPolicy judge = LiveDefender(learner, agent_K, normalize);
    const Comparator cmp = [&judge](const std::vector<Count>& a,
                                    const std::vector<Count>& b, Rng& r) {
      // Destroying A means A looked larger.
      return judge(Partition{a, b}, r);
    };
    return BinarySearchPartition(s, cmp, rng).partition;
  };
}

std::unique_ptr<Env> MakeEnv(const TrainConfig& config, const EnvConfig& env,
                             const Learner& learner, Rng& cut_rng,
                             const TrainHooks& hooks) {
  switch (config.role) {
    case Role::kDefender:
      return std::make_unique<DefenderEnv>(env, ResolveAttacker(env.opponent),
                                           config.network_K(), config.normalize_obs,
                                           hooks.episode_log);
    case Role::kAttacker:
      if (env.K != config.env.K) {
        throw ConfigError("attacker networks cannot be embedded across K");
      }
      return std::make_unique<AttackerEnv>(env, ResolveDefender(env.opponent),
                                           config.normalize_obs);
    case Role::kComparator:
      return std::make_unique<DefenderEnv>(env, SelfPlayAttacker(config, learner, cut_rng),
                                           config.network_K(), config.normalize_obs,
                                           hooks.episode_log);
  }
  throw ConfigError("unknown role");
}

TrainedAgent TrainAs(Algorithm algorithm, const TrainConfig& config,
                     const TrainHooks& hooks) {
  if (config.algorithm != algorithm) {
    throw ConfigError("config names algorithm " + AlgorithmName(config.algorithm) +
                      ", expected " + AlgorithmName(algorithm));
  }
  return Train(config, hooks);
}

}  // namespace

TrainedAgent TrainCurriculum(const TrainConfig& config,
                             const std::vector<TrainPhase>& phases,
                             const TrainHooks& hooks, const PhaseCallback& after_phase) {
  config.Validate();
  if (phases.empty()) throw ConfigError("training needs at least one phase");
  for (const TrainPhase& phase : phases) {
    TrainConfig check = config;
    check.env = phase.env;
    check.Validate();
    if (phase.steps < 0) throw ConfigError("phase steps must be non-negative");
    if (config.role == Role::kAttacker && phase.env.K != config.env.K) {
      throw ConfigError("attacker networks cannot be embedded across K");
    }
    if (phase.env.K > config.network_K()) {
      throw ConfigError("phase K=" + std::to_string(phase.env.K) +
                        " exceeds the network K=" + std::to_string(config.network_K()));
    }
  }
  auto learner = Learner::Create(config, ObsDim(config), NumActions(config));
  CurveRecorder curve(config, *learner);
  Rng env_rng(DeriveSeed(config.seed, kEnvStream));
  Rng cut_rng(DeriveSeed(config.seed, kSelfPlayStream));
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto env = MakeEnv(config, phases[i].env, *learner, cut_rng, hooks);
    curve.set_env(phases[i].env);
    learner->Train(*env, phases[i].steps, env_rng, std::ref(curve));
    if (after_phase) {
      TrainedAgent snapshot = learner->Snapshot();
      snapshot.train_curve = curve.curve();
      after_phase(i, snapshot);
    }
  }
  curve.Finish();
  TrainedAgent agent = learner->Snapshot();
  agent.train_curve = curve.curve();
  return agent;
}

TrainedAgent TrainValueLearner(const TrainConfig& config, const TrainHooks& hooks) {
  return TrainAs(Algorithm::kValueLearner, config, hooks);
}
TrainedAgent TrainPolicyGrad(const TrainConfig& config, const TrainHooks& hooks) {
  return TrainAs(Algorithm::kPolicyGrad, config, hooks);
}
TrainedAgent TrainActorCritic(const TrainConfig& config, const TrainHooks& hooks) {
  return TrainAs(Algorithm::kActorCritic, config, hooks);
}
TrainedAgent TrainRandomSearch(const TrainConfig& config, const TrainHooks& hooks) {
  return TrainAs(Algorithm::kRandomSearch, config, hooks);
}

TrainedAgent Train(const TrainConfig& config, const TrainHooks& hooks) {
  return TrainCurriculum(config, {{config.env, config.total_steps}}, hooks);
}

MultiagentResult TrainMultiagent(const TrainConfig& attacker_config,
                                 const TrainConfig& defender_config,
                                 std::int64_t switch_every, std::int64_t total_steps) {
  attacker_config.Validate();
  defender_config.Validate();
  if (attacker_config.role != Role::kAttacker || defender_config.role != Role::kDefender) {
    throw ConfigError("multiagent training needs an attacker and a defender config");
  }
  if (attacker_config.env.K != defender_config.env.K ||
      attacker_config.env.start != defender_config.env.start ||
      attacker_config.env.potential_units != defender_config.env.potential_units) {
    throw ConfigError("multiagent configs must share K, start and potential");
  }
  if (attacker_config.network_K() != attacker_config.env.K) {
    throw ConfigError("attacker networks cannot be embedded across K");
  }
  if (switch_every < 1 || total_steps < 1) {
    throw ConfigError("switch_every and total_steps must be positive");
  }
  const int K = defender_config.env.K;
  const int def_K = defender_config.network_K();

  auto att = Learner::Create(attacker_config, AttackerObsDim(K), AttackerActionDim(K));
  auto def = Learner::Create(defender_config, DefenderObsDim(def_K), 2);
  AttackerEnv att_env(attacker_config.env,
                      LiveDefender(*def, def_K, defender_config.normalize_obs),
                      attacker_config.normalize_obs);
  DefenderEnv def_env(defender_config.env, LiveAttacker(*att, attacker_config.normalize_obs),
                      def_K, defender_config.normalize_obs);
  Rng att_rng(DeriveSeed(attacker_config.seed, kEnvStream));
  Rng def_rng(DeriveSeed(defender_config.seed, kEnvStream));

  // Both curves come from the same greedy-vs-greedy matches.
  std::vector<CurvePoint> att_curve, def_curve;
  const std::int64_t interval = defender_config.eval_interval;
  auto record = [&](std::int64_t step) {
    const EvalResult r = EvaluateMatches(
        LiveAttacker(*att, attacker_config.normalize_obs),
        LiveDefender(*def, def_K, defender_config.normalize_obs),
        defender_config.env.start_distribution(), defender_config.eval_games,
        DeriveSeed(defender_config.seed, kEvalStream), Player::kDefender);
    def_curve.push_back({step, r.win_rate});
    att_curve.push_back({step, 1.0 - r.win_rate});
  };

  std::int64_t done = 0;
  bool defender_turn = true;
  while (done < total_steps) {
    const std::int64_t n = std::min(switch_every, total_steps - done);
    const std::int64_t base = done;
    const StepHook hook = [&](std::int64_t) {
      ++done;
      if (interval > 0 && done % interval == 0) record(done);
    };
    if (defender_turn) {
      def->Train(def_env, n, def_rng, hook);
    } else {
      att->Train(att_env, n, att_rng, hook);
    }
    done = base + n;
    defender_turn = !defender_turn;
  }
  if (def_curve.empty() || def_curve.back().step != done) record(done);

  MultiagentResult result{att->Snapshot(), def->Snapshot()};
  result.attacker.train_curve = std::move(att_curve);
  result.defender.train_curve = std::move(def_curve);
  return result;
}

TrainedAgent TrainSelfPlay(const TrainConfig& config, const TrainHooks& hooks) {
  if (config.role != Role::kComparator) {
    throw ConfigError("self play trains comparator agents");
  }
  return Train(config, hooks);
}

double ComparatorAccuracy(const TrainedAgent& agent, const StartDistribution& start,
                          int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("comparator accuracy needs at least one sample");
  start.Validate();
  const Comparator cmp =
      NetworkComparator(std::make_shared<const TrainedAgent>(agent));
  Rng rng(seed);
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    const GameState s = SampleStartState(start, rng);
    const Partition p = RandomSplit(s, rng);
    const Units pa = PotentialOf(p.a);
    const Units pb = PotentialOf(p.b);
    if (pa == pb) {
      ++correct;
      continue;
    }
    const Side said = cmp(p.a, p.b, rng);
    correct += said == (pa > pb ? Side::kA : Side::kB);
  }
  return static_cast<double>(correct) / n;
}

}  // namespace ess
