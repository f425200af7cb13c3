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

#ifndef ESS_AGENT_HPP_
#define ESS_AGENT_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "ess/game.hpp"
#include "ess/nn.hpp"
#include "ess/train_config.hpp"

namespace ess {

// What the network's outputs mean; affects only confidence reporting.
enum class OutputKind { kActionValues, kLogits };

struct CurvePoint {
  std::int64_t step = 0;
  double win_rate = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

struct TrainedAgent {
  nn::Network net;
  Role role = Role::kDefender;
  int K = 5;  // board size the network was built for
  OutputKind output = OutputKind::kActionValues;
  bool normalize_obs = false;
  std::string algorithm;
  std::vector<CurvePoint> train_curve;
  std::string config_hash;

  bool operator==(const TrainedAgent&) const = default;
};

inline constexpr int kAgentFormatVersion = 1;

nlohmann::json ToJson(const TrainedAgent& agent);
TrainedAgent AgentFromJson(const nlohmann::json& j);
// Weight files are the JSON form above, dumped without indentation.
std::string SerializeAgent(const TrainedAgent& agent);
void SaveAgent(const TrainedAgent& agent, const std::string& path);
// Throws ConfigError when the file is missing or malformed.
TrainedAgent LoadAgent(const std::string& path);

// Network outputs for a partition seen by a defender or comparator agent.
// Boards smaller than the agent's K are embedded top-aligned.
nn::Vector DefenderScores(const TrainedAgent& agent, const Partition& partition);
nn::Vector AttackerScores(const TrainedAgent& agent, const GameState& state);

// Index of the largest entry; exact ties are broken uniformly with `rng`.
int ArgmaxRandomTies(const nn::Vector& v, Rng& rng);

// Frozen greedy policies. Defender and comparator agents destroy the side
// with the larger output; attacker agents play their best level; comparator
// agents attack through the binary search.
DefenderPolicy AgentDefenderPolicy(std::shared_ptr<const TrainedAgent> agent);
AttackerPolicy AgentAttackerPolicy(std::shared_ptr<const TrainedAgent> agent);

}  // namespace ess

#endif  // ESS_AGENT_HPP_
