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

#include "ess/agent.hpp"

#include <fstream>
#include <sstream>

#include "ess/embedding.hpp"
#include "ess/encoding.hpp"
#include "ess/errors.hpp"
#include "ess/self_play.hpp"

namespace ess {

using nlohmann::json;

namespace {

const char* OutputName(OutputKind k) {
  return k == OutputKind::kActionValues ? "action-values" : "logits";
}

OutputKind ParseOutput(const std::string& s) {
  if (s == "action-values") return OutputKind::kActionValues;
  if (s == "logits") return OutputKind::kLogits;
  throw ConfigError("unknown output kind '" + s + "'");
}

}  // namespace

json ToJson(const TrainedAgent& agent) {
  json layers = json::array();
  for (const nn::Dense& d : agent.net.layers()) {
    std::vector<double> w(d.w.data(), d.w.data() + d.w.size());
    std::vector<double> b(d.b.data(), d.b.data() + d.b.size());
    layers.push_back(json{{"rows", d.w.rows()}, {"cols", d.w.cols()}, {"w", w}, {"b", b}});
  }
  json curve = json::array();
  for (const CurvePoint& p : agent.train_curve) curve.push_back({p.step, p.win_rate});
  return json{{"format", "ess-agent"},
              {"version", kAgentFormatVersion},
              {"role", RoleName(agent.role)},
              {"K", agent.K},
              {"arch", nn::ArchName(agent.net.arch())},
              {"input_dim", agent.net.input_dim()},
              {"action_dim", agent.net.output_dim()},
              {"output", OutputName(agent.output)},
              {"normalize_obs", agent.normalize_obs},
              {"algorithm", agent.algorithm},
              {"config_hash", agent.config_hash},
              {"train_curve", curve},
              {"layers", layers}};
}

TrainedAgent AgentFromJson(const json& j) {
  try {
    if (j.at("format") != "ess-agent") throw ConfigError("not an agent file");
    if (j.at("version").get<int>() != kAgentFormatVersion) {
      throw ConfigError("unsupported agent file version");
    }
    TrainedAgent agent;
    agent.role = ParseRole(j.at("role").get<std::string>());
    agent.K = j.at("K").get<int>();
    CheckLevelCount(agent.K);
    agent.output = ParseOutput(j.at("output").get<std::string>());
    agent.normalize_obs = j.at("normalize_obs").get<bool>();
    agent.algorithm = j.at("algorithm").get<std::string>();
    agent.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& p : j.at("train_curve")) {
      agent.train_curve.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<double>()});
    }
    std::vector<nn::Dense> layers;
    for (const auto& l : j.at("layers")) {
      const auto rows = l.at("rows").get<Eigen::Index>();
      const auto cols = l.at("cols").get<Eigen::Index>();
      const auto w = l.at("w").get<std::vector<double>>();
      const auto b = l.at("b").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(w.size()) != rows * cols ||
          static_cast<Eigen::Index>(b.size()) != rows) {
        throw ConfigError("layer size mismatch in agent file");
      }
      layers.push_back({Eigen::Map<const nn::Matrix>(w.data(), rows, cols),
                        Eigen::Map<const nn::Vector>(b.data(), rows)});
    }
    agent.net = nn::Network::FromLayers(nn::ParseArch(j.at("arch").get<std::string>()),
                                        std::move(layers));
    const int in = agent.role == Role::kAttacker ? AttackerObsDim(agent.K)
                                                 : DefenderObsDim(agent.K);
    const int out = agent.role == Role::kAttacker ? AttackerActionDim(agent.K) : 2;
    if (agent.net.input_dim() != in || agent.net.output_dim() != out) {
      throw ConfigError("agent network shape does not match its role and K");
    }
    return agent;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed agent file: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("malformed agent file: ") + e.what());
  }
}

std::string SerializeAgent(const TrainedAgent& agent) {
  return ToJson(agent).dump() + "\n";
}

void SaveAgent(const TrainedAgent& agent, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write agent file " + path);
  out << SerializeAgent(agent);
}

TrainedAgent LoadAgent(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open agent file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ConfigError("agent file " + path + " is not JSON: " + e.what());
  }
  return AgentFromJson(j);
}

nn::Vector DefenderScores(const TrainedAgent& agent, const Partition& partition) {
  const Partition p =
      partition.K() == agent.K ? partition : CrossKEmbed(partition, agent.K);
  return agent.net.Forward(ToVector(EncodeDefenderObs(p, agent.normalize_obs)));
}

nn::Vector AttackerScores(const TrainedAgent& agent, const GameState& state) {
  if (state.K() != agent.K) {
    throw ConfigError("attacker agent built for K=" + std::to_string(agent.K) +
                      " cannot play K=" + std::to_string(state.K()));
  }
  return agent.net.Forward(ToVector(EncodeAttackerObs(state, agent.normalize_obs)));
}

int ArgmaxRandomTies(const nn::Vector& v, Rng& rng) {
  const double best = v.maxCoeff();
  std::vector<int> ties;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == best) ties.push_back(static_cast<int>(i));
  }
  if (ties.size() == 1) return ties.front();
  return ties[UniformIndex(rng, ties.size())];
}

DefenderPolicy AgentDefenderPolicy(std::shared_ptr<const TrainedAgent> agent) {
  if (agent->role == Role::kAttacker) {
    throw ConfigError("an attacker agent cannot play defender");
  }
  return [agent](const Partition& p, Rng& rng) {
    return ArgmaxRandomTies(DefenderScores(*agent, p), rng) == 0 ? Side::kA
                                                                 : Side::kB;
  };
}

AttackerPolicy AgentAttackerPolicy(std::shared_ptr<const TrainedAgent> agent) {
  switch (agent->role) {
    case Role::kAttacker:
      return [agent](const GameState& s, Rng& rng) {
        return AttackerActionToPartition(s, ArgmaxRandomTies(AttackerScores(*agent, s), rng));
      };
    case Role::kComparator:
      return [agent](const GameState& s, Rng& rng) {
        return BinarySearchPartition(s, NetworkComparator(agent), rng).partition;
      };
    case Role::kDefender:
      break;
  }
  throw ConfigError("a defender agent cannot play attacker");
}

}  // namespace ess
