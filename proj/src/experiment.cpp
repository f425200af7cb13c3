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

#include "ess/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "ess/errors.hpp"

namespace ess {

using nlohmann::json;

namespace {

void OnlyKeys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T Required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad '" + key + "': " + e.what());
  }
}

std::string ArmKindName(ExperimentArm::Kind k) {
  switch (k) {
    case ExperimentArm::Kind::kTrain:
      return "train";
    case ExperimentArm::Kind::kMultiagent:
      return "multiagent";
    case ExperimentArm::Kind::kFixed:
      return "fixed";
  }
  return "?";
}

std::vector<TrainPhase> PhasesOf(const ExperimentArm& arm) {
  if (!arm.phases.empty()) return arm.phases;
  return {{arm.agent.env, arm.agent.total_steps}};
}

// Role and K of whatever plays in the test envs for this arm.
struct Tested {
  Role role;
  int K;  // 0 for scripted players, which fit any board
};

Tested TestedPlayer(const ExperimentArm& arm) {
  switch (arm.kind) {
    case ExperimentArm::Kind::kTrain:
      return {arm.agent.role, arm.agent.network_K()};
    case ExperimentArm::Kind::kMultiagent:
      return {Role::kDefender, arm.agent.network_K()};
    case ExperimentArm::Kind::kFixed:
      break;
  }
  return {Role::kDefender, 0};
}

std::string Fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

ExperimentSpec ExperimentSpecFromJson(const json& j) {
  OnlyKeys(j, {"name", "seeds", "eval_games", "arms", "test_envs"}, "experiment");
  ExperimentSpec spec;
  spec.name = Required<std::string>(j, "name", "experiment");
  spec.seeds = Required<std::vector<std::uint64_t>>(j, "seeds", "experiment");
  if (j.contains("eval_games")) spec.eval_games = Required<int>(j, "eval_games", "experiment");
  if (!j.contains("arms") || !j.at("arms").is_array()) {
    throw ConfigError("experiment needs an 'arms' list");
  }
  for (const json& a : j.at("arms")) {
    ExperimentArm arm;
    const std::string where = "arm";
    arm.name = Required<std::string>(a, "name", where);
    const std::string kind = a.value("kind", std::string("train"));
    const std::string at = "arm '" + arm.name + "'";
    if (kind == "train") {
      OnlyKeys(a, {"name", "kind", "agent", "phases"}, at);
      arm.kind = ExperimentArm::Kind::kTrain;
      if (!a.contains("agent")) throw ConfigError(at + " needs 'agent'");
      arm.agent = TrainConfigFromJson(a.at("agent"));
      if (a.contains("phases")) {
        if (!a.at("phases").is_array()) throw ConfigError(at + ": 'phases' must be a list");
        for (const json& p : a.at("phases")) {
          OnlyKeys(p, {"env", "steps"}, at + " phase");
          if (!p.contains("env")) throw ConfigError(at + " phase needs 'env'");
          arm.phases.push_back({EnvConfigFromJson(p.at("env")),
                                Required<std::int64_t>(p, "steps", at + " phase")});
        }
        if (arm.phases.empty()) throw ConfigError(at + " has an empty phase list");
      }
    } else if (kind == "multiagent") {
      OnlyKeys(a, {"name", "kind", "attacker", "defender", "switch_every", "total_steps"}, at);
      arm.kind = ExperimentArm::Kind::kMultiagent;
      if (!a.contains("attacker") || !a.contains("defender")) {
        throw ConfigError(at + " needs 'attacker' and 'defender'");
      }
      arm.attacker = TrainConfigFromJson(a.at("attacker"));
      arm.agent = TrainConfigFromJson(a.at("defender"));
      arm.switch_every = Required<std::int64_t>(a, "switch_every", at);
      arm.total_steps = Required<std::int64_t>(a, "total_steps", at);
    } else if (kind == "fixed") {
      OnlyKeys(a, {"name", "kind", "defender"}, at);
      arm.kind = ExperimentArm::Kind::kFixed;
      arm.fixed_defender = Required<std::string>(a, "defender", at);
    } else {
      throw ConfigError(at + ": unknown kind '" + kind + "'");
    }
    spec.arms.push_back(std::move(arm));
  }
  if (!j.contains("test_envs") || !j.at("test_envs").is_array()) {
    throw ConfigError("experiment needs a 'test_envs' list");
  }
  for (const json& t : j.at("test_envs")) {
    OnlyKeys(t, {"name", "env"}, "test env");
    if (!t.contains("env")) throw ConfigError("test env needs 'env'");
    spec.test_envs.push_back(
        {Required<std::string>(t, "name", "test env"), EnvConfigFromJson(t.at("env"))});
  }
  ValidateExperiment(spec);
  return spec;
}

json ToJson(const ExperimentSpec& spec) {
  json arms = json::array();
  for (const ExperimentArm& arm : spec.arms) {
    json a{{"name", arm.name}, {"kind", ArmKindName(arm.kind)}};
    switch (arm.kind) {
      case ExperimentArm::Kind::kTrain: {
        a["agent"] = ToJson(arm.agent);
        json phases = json::array();
        for (const TrainPhase& p : arm.phases) {
          phases.push_back({{"env", ToJson(p.env)}, {"steps", p.steps}});
        }
        if (!phases.empty()) a["phases"] = phases;
        break;
      }
      case ExperimentArm::Kind::kMultiagent:
        a["attacker"] = ToJson(arm.attacker);
        a["defender"] = ToJson(arm.agent);
        a["switch_every"] = arm.switch_every;
        a["total_steps"] = arm.total_steps;
        break;
      case ExperimentArm::Kind::kFixed:
        a["defender"] = arm.fixed_defender;
        break;
    }
    arms.push_back(std::move(a));
  }
  json tests = json::array();
  for (const TestEnv& t : spec.test_envs) tests.push_back({{"name", t.name}, {"env", ToJson(t.env)}});
  return json{{"name", spec.name},
              {"seeds", spec.seeds},
              {"eval_games", spec.eval_games},
              {"arms", arms},
              {"test_envs", tests}};
}

void ValidateExperiment(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) throw ConfigError("experiment needs at least one seed");
  if (spec.arms.empty()) throw ConfigError("experiment needs at least one arm");
  if (spec.test_envs.empty()) throw ConfigError("experiment needs at least one test env");
  if (spec.eval_games < 1) throw ConfigError("eval_games must be positive");
  std::set<std::string> names;
  for (const ExperimentArm& arm : spec.arms) {
    if (!names.insert(arm.name).second) throw ConfigError("duplicate arm '" + arm.name + "'");
  }
  names.clear();
  for (const TestEnv& t : spec.test_envs) {
    if (!names.insert(t.name).second) throw ConfigError("duplicate test env '" + t.name + "'");
    t.env.Validate();
  }

  for (const ExperimentArm& arm : spec.arms) {
    const std::string at = "arm '" + arm.name + "'";
    switch (arm.kind) {
      case ExperimentArm::Kind::kTrain:
        arm.agent.Validate();
        for (const TrainPhase& p : PhasesOf(arm)) {
          if (p.steps < 0) throw ConfigError(at + ": negative phase steps");
          TrainConfig check = arm.agent;
          check.env = p.env;
          check.Validate();
          if (p.env.K > arm.agent.network_K()) {
            throw ConfigError(at + ": phase K=" + std::to_string(p.env.K) +
                              " exceeds the network K; set agent_K to embed");
          }
          if (arm.agent.role == Role::kAttacker) {
            ResolveDefender(p.env.opponent);
          } else if (arm.agent.role == Role::kDefender) {
            ResolveAttacker(p.env.opponent);
          }
        }
        break;
      case ExperimentArm::Kind::kMultiagent:
        arm.attacker.Validate();
        arm.agent.Validate();
        if (arm.attacker.role != Role::kAttacker || arm.agent.role != Role::kDefender) {
          throw ConfigError(at + ": needs an attacker and a defender config");
        }
        if (arm.attacker.env.K != arm.agent.env.K) {
          throw ConfigError(at + ": attacker and defender K differ");
        }
        if (arm.switch_every < 1 || arm.total_steps < 1) {
          throw ConfigError(at + ": switch_every and total_steps must be positive");
        }
        break;
      case ExperimentArm::Kind::kFixed:
        ResolveDefender(arm.fixed_defender);
        break;
    }
    const Tested tested = TestedPlayer(arm);
    for (const TestEnv& t : spec.test_envs) {
      const std::string where = at + " on test env '" + t.name + "'";
      if (tested.role == Role::kAttacker) {
        if (t.env.K != tested.K) {
          throw ConfigError(where + ": attacker networks cannot change K");
        }
        ResolveDefender(t.env.opponent);
      } else {
        if (tested.K != 0 && t.env.K > tested.K) {
          throw ConfigError(where + ": K=" + std::to_string(t.env.K) +
                            " exceeds the network K=" + std::to_string(tested.K));
        }
        ResolveAttacker(t.env.opponent);
      }
    }
  }
}

ExperimentResult RunExperiment(const ExperimentSpec& spec, int workers) {
  ValidateExperiment(spec);

  struct Job {
    const ExperimentArm* arm;
    std::uint64_t seed;
    std::vector<ExperimentRow> rows;
    std::optional<TrainedAgent> agent;
  };
  std::vector<Job> jobs;
  for (const ExperimentArm& arm : spec.arms) {
    for (std::uint64_t seed : spec.seeds) jobs.push_back({&arm, seed, {}, std::nullopt});
  }

  // Every arm sees the same test games for a given seed and test env.
  auto test_all = [&](Job& job, int phase, std::int64_t step,
                      const std::function<EvalResult(const EnvConfig&, std::uint64_t)>& eval) {
    for (std::size_t t = 0; t < spec.test_envs.size(); ++t) {
      const std::uint64_t eval_seed = DeriveSeed(job.seed, 1000 + t);
      job.rows.push_back({job.arm->name, phase, step, spec.test_envs[t].name, job.seed,
                          eval(spec.test_envs[t].env, eval_seed)});
    }
  };

  auto run = [&](Job& job) {
    const ExperimentArm& arm = *job.arm;
    switch (arm.kind) {
      case ExperimentArm::Kind::kTrain: {
        TrainConfig config = arm.agent;
        config.seed = job.seed;
        const std::vector<TrainPhase> phases = PhasesOf(arm);
        std::int64_t step = 0;
        job.agent = TrainCurriculum(
            config, phases, {}, [&](std::size_t phase, const TrainedAgent& agent) {
              step += phases[phase].steps;
              test_all(job, static_cast<int>(phase), step,
                       [&](const EnvConfig& env, std::uint64_t s) {
                         return EvaluateAgent(agent, env, spec.eval_games, s);
                       });
            });
        break;
      }
      case ExperimentArm::Kind::kMultiagent: {
        TrainConfig att = arm.attacker;
        TrainConfig def = arm.agent;
        att.seed = DeriveSeed(job.seed, 1);
        def.seed = job.seed;
        MultiagentResult r = TrainMultiagent(att, def, arm.switch_every, arm.total_steps);
        test_all(job, 0, arm.total_steps, [&](const EnvConfig& env, std::uint64_t s) {
          return EvaluateAgent(r.defender, env, spec.eval_games, s);
        });
        job.agent = std::move(r.defender);
        break;
      }
      case ExperimentArm::Kind::kFixed: {
        const DefenderPolicy defender = ResolveDefender(arm.fixed_defender);
        test_all(job, 0, 0, [&](const EnvConfig& env, std::uint64_t s) {
          return EvaluateMatches(ResolveAttacker(env.opponent), defender,
                                 env.start_distribution(), spec.eval_games, s,
                                 Player::kDefender);
        });
        break;
      }
    }
  };

  workers = std::clamp<int>(workers, 1, static_cast<int>(jobs.size()));
  if (workers == 1) {
    for (Job& job : jobs) run(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < jobs.size(); i = next++) run(jobs[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ExperimentResult result;
  for (Job& job : jobs) {
    for (ExperimentRow& row : job.rows) result.rows.push_back(std::move(row));
    if (job.agent) result.agents.emplace_back(job.arm->name, std::move(*job.agent));
  }

  // Aggregate over seeds, keeping the first-seen order of the keys.
  std::vector<std::tuple<std::string, int, std::string>> order;
  std::map<std::tuple<std::string, int, std::string>, AggregateRow> groups;
  for (const ExperimentRow& row : result.rows) {
    const auto key = std::make_tuple(row.arm, row.phase, row.test_env);
    auto [it, fresh] = groups.try_emplace(key);
    AggregateRow& g = it->second;
    const double w = row.result.win_rate;
    if (fresh) {
      order.push_back(key);
      g = {row.arm, row.phase, row.step, row.test_env, 0, 0.0, w, w};
    }
    ++g.seeds;
    g.mean += w;
    g.min = std::min(g.min, w);
    g.max = std::max(g.max, w);
  }
  for (const auto& key : order) {
    AggregateRow g = groups.at(key);
    g.mean /= g.seeds;
    result.aggregate.push_back(g);
  }
  return result;
}

std::string RowsCsv(const ExperimentResult& result) {
  std::string out = std::string(kExperimentHeader) + "\n";
  for (const ExperimentRow& r : result.rows) {
    out += r.arm + "," + std::to_string(r.phase) + "," + std::to_string(r.step) + "," +
           r.test_env + "," + std::to_string(r.seed) + "," + std::to_string(r.result.games) +
           "," + Fixed(r.result.win_rate) + "," + Fixed(r.result.mean_reward) + "," +
           Fixed(r.result.wilson_low) + "," + Fixed(r.result.wilson_high) + "\n";
  }
  return out;
}

std::string AggregateCsv(const ExperimentResult& result) {
  std::string out = std::string(kAggregateHeader) + "\n";
  for (const AggregateRow& g : result.aggregate) {
    out += g.arm + "," + std::to_string(g.phase) + "," + std::to_string(g.step) + "," +
           g.test_env + "," + std::to_string(g.seeds) + "," + Fixed(g.mean) + "," +
           Fixed(g.min) + "," + Fixed(g.max) + "\n";
  }
  return out;
}

}  // namespace ess
