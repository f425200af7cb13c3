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

#include "ess/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <ostream>

#include "ess/embedding.hpp"
#include "ess/errors.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"

namespace ess {
namespace {

int ObsK(const ObservationVec& obs) {
  return static_cast<int>(obs.values.size()) / 2 - 1;
}

// Top-aligned embedding done on the encoded vector. Normalized entries only
// depend on distance to the top, so this is valid for both encodings.
nn::Vector EmbedObservation(const ObservationVec& obs, int K) {
  const int k = ObsK(obs);
  if (k > K) {
    throw ConfigError("observation for K=" + std::to_string(k) +
                      " does not fit a network for K=" + std::to_string(K));
  }
  const int shift = K - k;
  nn::Vector v = nn::Vector::Zero(DefenderObsDim(K));
  for (int i = 0; i <= k; ++i) {
    v[shift + i] = obs.values[i];
    v[K + 1 + shift + i] = obs.values[k + 1 + i];
  }
  return v;
}

Side Preferred(const nn::Vector& scores) {
  return scores[0] >= scores[1] ? Side::kA : Side::kB;
}

std::string Fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

MoveGrade GradeMove(const Partition& partition, Side destroy) {
  const int K = partition.K();
  const Units pa = Potential(partition, Side::kA);
  const Units pb = Potential(partition, Side::kB);
  MoveGrade g;
  if (pa == pb) {
    g.correct = true;
    return g;
  }
  const Side big = pa > pb ? Side::kA : Side::kB;
  const Units big_units = std::max(pa, pb);
  const Units small_units = std::min(pa, pb);
  g.correct = destroy == big;
  g.terminal_mistake =
      !g.correct && big_units >= UnitHalf(K) && small_units < UnitHalf(K);
  g.fatal_mistake = g.terminal_mistake && pa + pb < UnitOne(K);
  return g;
}

std::vector<LabeledMove> BuildSupervisedDataset(const std::vector<MatchRecord>& records,
                                                bool normalize_obs) {
  std::vector<LabeledMove> rows;
  for (std::size_t m = 0; m < records.size(); ++m) {
    const auto& steps = records[m].steps;
    for (std::size_t t = 0; t < steps.size(); ++t) {
      const Partition& p = steps[t].partition;
      LabeledMove row;
      row.observation = EncodeDefenderObs(p, normalize_obs);
      row.oracle_choice = OptimalDefenderChoice(p);
      row.tie = Potential(p, Side::kA) == Potential(p, Side::kB);
      row.match = static_cast<std::int64_t>(m);
      row.turn = static_cast<int>(t);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<LabeledMove> UniformPartitionDataset(const StartDistribution& start, int n,
                                                 std::uint64_t seed, bool normalize_obs) {
  start.Validate();
  if (n < 0) throw ValidationError("dataset size must be non-negative");
  Rng rng(seed);
  std::vector<LabeledMove> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    const GameState s = SampleStartState(start, rng);
    const Partition p = RandomSplit(s, rng);
    LabeledMove row;
    row.observation = EncodeDefenderObs(p, normalize_obs);
    row.oracle_choice = OptimalDefenderChoice(p);
    row.tie = Potential(p, Side::kA) == Potential(p, Side::kB);
    row.match = i;
    rows.push_back(std::move(row));
  }
  return rows;
}

SupervisedResult TrainSupervised(const std::vector<LabeledMove>& dataset,
                                 const SupervisedConfig& config) {
  CheckLevelCount(config.K);
  if (config.epochs < 0 || config.batch_size < 1 || !(config.learning_rate > 0) ||
      !(config.holdout_fraction >= 0 && config.holdout_fraction < 1)) {
    throw ConfigError("bad supervised training config");
  }
  const std::size_t n = dataset.size();
  if (n == 0) throw ValidationError("supervised training needs at least one row");
  std::vector<nn::Vector> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dataset[i].observation.layout != ObsLayout::kDefenderConcat) {
      throw ValidationError("supervised rows must use the defender layout");
    }
    x[i] = EmbedObservation(dataset[i].observation, config.K);
    y[i] = dataset[i].oracle_choice == Side::kA ? 0 : 1;
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[UniformIndex(rng, i)]);
  const auto n_hold = static_cast<std::size_t>(std::floor(config.holdout_fraction * n));
  const std::vector<std::size_t> holdout(order.begin(), order.begin() + n_hold);
  std::vector<std::size_t> train(order.begin() + n_hold, order.end());

  Rng init(DeriveSeed(config.seed, 1));
  nn::Network net(config.arch, DefenderObsDim(config.K), 2, init);
  nn::Adam adam(net, config.learning_rate);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = train.size(); i > 1; --i) {
      std::swap(train[i - 1], train[UniformIndex(rng, i)]);
    }
    for (std::size_t at = 0; at < train.size(); at += config.batch_size) {
      const std::size_t end = std::min(train.size(), at + config.batch_size);
      nn::Matrix xb(DefenderObsDim(config.K), static_cast<Eigen::Index>(end - at));
      std::vector<int> yb(end - at);
      for (std::size_t j = at; j < end; ++j) {
        xb.col(j - at) = x[train[j]];
        yb[j - at] = y[train[j]];
      }
      nn::Network::Cache cache;
      const nn::Matrix logits = net.Forward(xb, cache);
      nn::Matrix d;
      const double loss = nn::SoftmaxCrossEntropy(logits, yb, &d);
      adam.Step(net, net.Backward(cache, d));
      if (!std::isfinite(loss) || !net.AllFinite()) {
        throw RuntimeFailure("supervised training diverged");
      }
    }
  }

  auto accuracy = [&](const std::vector<std::size_t>& idx) {
    if (idx.empty()) return 0.0;
    std::size_t right = 0;
    for (std::size_t i : idx) {
      const Side said = Preferred(net.Forward(x[i]));
      right += dataset[i].tie || said == dataset[i].oracle_choice;
    }
    return static_cast<double>(right) / idx.size();
  };

  SupervisedResult r;
  r.train_accuracy = accuracy(train);
  r.holdout_accuracy = accuracy(holdout);
  r.train_rows = static_cast<std::int64_t>(train.size());
  r.holdout_rows = static_cast<std::int64_t>(holdout.size());
  r.agent.net = std::move(net);
  r.agent.role = Role::kDefender;
  r.agent.K = config.K;
  r.agent.output = OutputKind::kLogits;
  r.agent.normalize_obs = config.normalize_obs;
  r.agent.algorithm = "supervised";
  return r;
}

MoveQuality MeasureMoveQuality(const std::string& name, const DefenderPolicy& defender,
                               const EnvConfig& env, int n_games, std::uint64_t seed) {
  env.Validate();
  if (n_games < 1) throw ValidationError("move quality needs at least one game");
  const AttackerPolicy attacker = ResolveAttacker(env.opponent);
  const StartDistribution start = env.start_distribution();
  MoveQuality q;
  q.agent = name;
  q.K = env.K;
  q.seed = seed;
  q.games = n_games;
  std::int64_t wins = 0, right = 0, terminal = 0, fatal = 0;
  for (int i = 0; i < n_games; ++i) {
    Rng start_rng(DeriveSeed(seed, 2 * static_cast<std::uint64_t>(i)));
    const GameState s0 = SampleStartState(start, start_rng);
    const MatchRecord r =
        PlayMatch(attacker, defender, s0, DeriveSeed(seed, 2 * static_cast<std::uint64_t>(i) + 1));
    wins += r.outcome.winner == Player::kDefender;
    for (const Step& step : r.steps) {
      const MoveGrade g = GradeMove(step.partition, step.destroyed);
      ++q.moves;
      right += g.correct;
      terminal += g.terminal_mistake;
      fatal += g.fatal_mistake;
    }
  }
  q.win_rate = static_cast<double>(wins) / n_games;
  if (q.moves > 0) {
    q.accuracy = static_cast<double>(right) / q.moves;
    q.terminal_rate = static_cast<double>(terminal) / q.moves;
    q.fatal_rate = static_cast<double>(fatal) / q.moves;
  }
  return q;
}

std::vector<MoveQuality> CompareRlVsSupervised(const TrainedAgent& rl_agent,
                                               const TrainedAgent& supervised_agent,
                                               const EnvConfig& env, int n_games,
                                               std::uint64_t seed) {
  std::vector<MoveQuality> rows;
  rows.push_back(MeasureMoveQuality(
      "rl", AgentDefenderPolicy(std::make_shared<const TrainedAgent>(rl_agent)), env,
      n_games, seed));
  rows.push_back(MeasureMoveQuality(
      "supervised",
      AgentDefenderPolicy(std::make_shared<const TrainedAgent>(supervised_agent)), env,
      n_games, seed));
  return rows;
}

ComparisonRun RunRlVsSupervised(const TrainConfig& rl_config,
                                const SupervisedConfig& supervised_config,
                                int n_games) {
  if (rl_config.role != Role::kDefender) {
    throw ConfigError("the supervised comparison needs a defender RL config");
  }
  std::vector<MatchRecord> log;
  ComparisonRun run;
  run.rl_agent = Train(rl_config, TrainHooks{&log});
  SupervisedConfig sup = supervised_config;
  sup.K = rl_config.network_K();
  sup.arch = rl_config.arch;
  sup.normalize_obs = rl_config.normalize_obs;
  run.supervised = TrainSupervised(BuildSupervisedDataset(log, sup.normalize_obs), sup);
  run.rows = CompareRlVsSupervised(run.rl_agent, run.supervised.agent, rl_config.env,
                                   n_games, DeriveSeed(rl_config.seed, 7));
  for (MoveQuality& q : run.rows) q.seed = rl_config.seed;
  return run;
}

std::string ToCsvRow(const MoveQuality& q) {
  return q.agent + "," + std::to_string(q.K) + "," + std::to_string(q.seed) + "," +
         std::to_string(q.games) + "," + std::to_string(q.moves) + "," +
         Fixed(q.accuracy) + "," + Fixed(q.win_rate) + "," + Fixed(q.terminal_rate) +
         "," + Fixed(q.fatal_rate);
}

double NullSetCheck(const TrainedAgent& agent, int K) {
  CheckLevelCount(K);
  if (agent.role == Role::kAttacker) {
    throw ConfigError("the null-set check needs a defender or comparator agent");
  }
  int violations = 0;
  for (int level = 0; level <= K; ++level) {
    std::vector<Count> one(K + 1, 0);
    one[level] = 1;
    const std::vector<Count> none(K + 1, 0);
    // A tie counts against the agent: it does not prefer the nonempty set.
    const nn::Vector first = DefenderScores(agent, Partition{one, none});
    violations += !(first[0] > first[1]);
    const nn::Vector second = DefenderScores(agent, Partition{none, one});
    violations += !(second[1] > second[0]);
  }
  return static_cast<double>(violations) / (2 * (K + 1));
}

void CalibrationDump(const TrainedAgent& agent, const std::vector<Partition>& partitions,
                     std::ostream& out) {
  const bool logits = agent.output == OutputKind::kLogits;
  out << kCalibrationHeader << "\n";
  for (const Partition& p : partitions) {
    const nn::Vector scores = DefenderScores(agent, p);
    const Side pick = Preferred(scores);
    double confidence;
    if (logits) {
      confidence = nn::Softmax(scores).maxCoeff();
    } else {
      // Values live in [-1, 1], so the gap is at most 2.
      confidence = std::min(1.0, std::abs(scores[0] - scores[1]) / 2.0);
    }
    out << (Potential(p, Side::kA) - Potential(p, Side::kB)) << "," << Fixed(confidence)
        << "," << (GradeMove(p, pick).correct ? 1 : 0) << ","
        << (logits ? "softmax_prob" : "value_gap") << "\n";
  }
}

}  // namespace ess
