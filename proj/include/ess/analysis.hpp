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

// Move grading against the potential oracle, supervised baselines, and the
// diagnostic dumps used to study what trained defenders learned.

#ifndef ESS_ANALYSIS_HPP_
#define ESS_ANALYSIS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ess/agent.hpp"
#include "ess/encoding.hpp"
#include "ess/game.hpp"
#include "ess/rl.hpp"

namespace ess {

// Grades are computed after naming the sides so the first is the (weakly)
// larger one. A tie grades either choice as correct.
struct MoveGrade {
  bool correct = false;
  // The larger side is worth at least one half, the smaller less, and the
  // smaller one was destroyed.
  bool terminal_mistake = false;
  // A terminal mistake from a position worth less than one, i.e. a forced
  // win thrown away.
  bool fatal_mistake = false;
  bool operator==(const MoveGrade&) const = default;
};

MoveGrade GradeMove(const Partition& partition, Side destroy);

struct LabeledMove {
  ObservationVec observation;  // defender layout at the match's K
  Side oracle_choice = Side::kA;
  bool tie = false;  // equal potentials: either choice is right
  std::int64_t match = 0;
  int turn = 0;
};

// One row per defender turn of every record, labeled by the optimal defender.
std::vector<LabeledMove> BuildSupervisedDataset(const std::vector<MatchRecord>& records,
                                                bool normalize_obs = false);

// Ablation: partitions drawn uniformly (each level split uniformly) from
// start states of `start`, instead of the states an RL run visited.
std::vector<LabeledMove> UniformPartitionDataset(const StartDistribution& start, int n,
                                                 std::uint64_t seed,
                                                 bool normalize_obs = false);

struct SupervisedConfig {
  nn::Arch arch = nn::Arch::kMlp2x300;
  int K = 5;  // network K; rows from smaller boards are embedded
  bool normalize_obs = false;
  int epochs = 5;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 1;
};

struct SupervisedResult {
  TrainedAgent agent;
  double train_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  std::int64_t train_rows = 0;
  std::int64_t holdout_rows = 0;
};

// Cross-entropy classifier over {destroy A, destroy B}. The split and the
// minibatch order come from config.seed.
SupervisedResult TrainSupervised(const std::vector<LabeledMove>& dataset,
                                 const SupervisedConfig& config);

struct MoveQuality {
  std::string agent;
  int K = 0;
  std::uint64_t seed = 0;
  std::int64_t games = 0;
  std::int64_t moves = 0;
  double accuracy = 0.0;
  double win_rate = 0.0;
  double terminal_rate = 0.0;  // per move
  double fatal_rate = 0.0;     // per move
};

// Plays `n_games` against env.opponent and grades every defender move.
MoveQuality MeasureMoveQuality(const std::string& name, const DefenderPolicy& defender,
                               const EnvConfig& env, int n_games, std::uint64_t seed);

std::vector<MoveQuality> CompareRlVsSupervised(const TrainedAgent& rl_agent,
                                               const TrainedAgent& supervised_agent,
                                               const EnvConfig& env, int n_games,
                                               std::uint64_t seed);

// The full pipeline: train an RL defender while logging every observation,
// fit a supervised classifier of the same architecture to the oracle labels
// of that stream, then grade both.
struct ComparisonRun {
  TrainedAgent rl_agent;
  SupervisedResult supervised;
  std::vector<MoveQuality> rows;
};
ComparisonRun RunRlVsSupervised(const TrainConfig& rl_config,
                                const SupervisedConfig& supervised_config,
                                int n_games);

inline constexpr const char* kMoveQualityHeader =
    "agent,K,seed,games,moves,accuracy,win_rate,terminal_rate,fatal_rate";
std::string ToCsvRow(const MoveQuality& q);

// Share of one-hot-versus-empty presentations, over both orderings, in which
// the agent does not strictly prefer destroying the nonempty set.
double NullSetCheck(const TrainedAgent& agent, int K);

// Rows of (potential difference in units, confidence in the preferred
// action, whether that action is correct). Confidence is the softmax
// probability for logit agents and the value gap scaled into [0, 1] for
// value agents; the metric column names which.
inline constexpr const char* kCalibrationHeader =
    "potential_diff_units,confidence,correct,metric";
void CalibrationDump(const TrainedAgent& agent, const std::vector<Partition>& partitions,
                     std::ostream& out);

}  // namespace ess

#endif  // ESS_ANALYSIS_HPP_
