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

// Declarative train-then-test experiments read from JSON spec files.
//
// {
//   "name": "...",
//   "seeds": [1, 2, 3],
//   "eval_games": 500,
//   "arms": [
//     {"name": "...", "kind": "train", "agent": {<train config>},
//      "phases": [{"env": {...}, "steps": 100000}, ...]},
//     {"name": "...", "kind": "multiagent", "attacker": {...}, "defender": {...},
//      "switch_every": 10000, "total_steps": 100000},
//     {"name": "...", "kind": "fixed", "defender": "optimal" | "random" | "policy:<file>"}
//   ],
//   "test_envs": [{"name": "...", "env": {...}}]
// }
//
// Trained arms are re-seeded with each entry of "seeds". Without "phases" a
// train arm runs a single phase on agent.env for agent.total_steps. Every
// phase is followed by a test on every test env, which is what the forgetting
// protocol reads.

#ifndef ESS_EXPERIMENT_HPP_
#define ESS_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ess/rl.hpp"
#include "ess/train_config.hpp"

namespace ess {

struct ExperimentArm {
  enum class Kind { kTrain, kMultiagent, kFixed };
  std::string name;
  Kind kind = Kind::kTrain;
  TrainConfig agent;                // train arms; the multiagent defender
  std::vector<TrainPhase> phases;   // train arms
  TrainConfig attacker;             // multiagent arms
  std::int64_t switch_every = 0;    // multiagent arms
  std::int64_t total_steps = 0;     // multiagent arms
  std::string fixed_defender;       // fixed arms
};

struct TestEnv {
  std::string name;
  EnvConfig env;
};

struct ExperimentSpec {
  std::string name;
  std::vector<std::uint64_t> seeds;
  int eval_games = 500;
  std::vector<ExperimentArm> arms;
  std::vector<TestEnv> test_envs;
};

// Parses and checks everything that can fail before training: unknown keys,
// empty seed lists, unreadable policy files, and test envs the trained
// agents cannot be evaluated on.
ExperimentSpec ExperimentSpecFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const ExperimentSpec& spec);
void ValidateExperiment(const ExperimentSpec& spec);

struct ExperimentRow {
  std::string arm;
  int phase = 0;
  std::int64_t step = 0;  // cumulative training steps when tested
  std::string test_env;
  std::uint64_t seed = 0;
  EvalResult result;
};

struct AggregateRow {
  std::string arm;
  int phase = 0;
  std::int64_t step = 0;
  std::string test_env;
  int seeds = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<AggregateRow> aggregate;
  // Final agents of trained arms, one per (arm, seed), in row order.
  std::vector<std::pair<std::string, TrainedAgent>> agents;
};

inline constexpr const char* kExperimentHeader =
    "arm,phase,step,test_env,seed,games,win_rate,mean_reward,wilson_low,wilson_high";
inline constexpr const char* kAggregateHeader =
    "arm,phase,step,test_env,seeds,mean_win_rate,min_win_rate,max_win_rate";

ExperimentResult RunExperiment(const ExperimentSpec& spec, int workers = 1);

std::string RowsCsv(const ExperimentResult& result);
std::string AggregateCsv(const ExperimentResult& result);

}  // namespace ess

#endif  // ESS_EXPERIMENT_HPP_
