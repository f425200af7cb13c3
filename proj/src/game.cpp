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

#include "ess/game.hpp"

#include <cmath>
#include <string>

#include "ess/errors.hpp"

namespace ess {

double StandardNormal(Rng& rng) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void CheckLevelCount(int K) {
  if (K < 1 || K > kMaxLevels) {
    throw ValidationError("K must be in [1, " + std::to_string(kMaxLevels) +
                          "], got " + std::to_string(K));
  }
}

Units PotentialOf(std::span<const Count> counts) {
  Units total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) {
      throw ValidationError("negative piece count at level " +
                            std::to_string(i));
    }
    if (counts[i] == 0) continue;
    if (i >= 62 || counts[i] > (kMaxUnits >> i)) {
      throw ArithmeticBoundError("potential exceeds 2^62 units at level " +
                                 std::to_string(i));
    }
    total += counts[i] << i;
    if (total > kMaxUnits) {
      throw ArithmeticBoundError("potential exceeds 2^62 units");
    }
  }
  return total;
}

void GameParams::Validate() const {
  CheckLevelCount(K);
  if (start_potential <= 0) {
    throw ValidationError("start potential must be positive");
  }
}

GameState::GameState(int K) : K_(K) {
  CheckLevelCount(K);
  counts_.assign(K + 1, 0);
}

GameState::GameState(int K, std::vector<Count> counts)
    : K_(K), counts_(std::move(counts)) {
  CheckLevelCount(K);
  if (counts_.size() != static_cast<std::size_t>(K) + 1) {
    throw ValidationError("state needs K+1 = " + std::to_string(K + 1) +
                          " counts, got " + std::to_string(counts_.size()));
  }
  for (int i = 0; i <= K; ++i) {
    if (counts_[i] < 0) {
      throw ValidationError("negative piece count at level " +
                            std::to_string(i));
    }
  }
}

Count GameState::num_pieces() const {
  Count n = 0;
  for (Count c : counts_) n += c;
  return n;
}

Units Potential(const GameState& state) { return PotentialOf(state.counts()); }

Units Potential(const Partition& p, Side side) {
  return PotentialOf(p.side(side));
}

const char* ToString(Side s) { return s == Side::kA ? "A" : "B"; }

const char* ToString(Player p) {
  return p == Player::kAttacker ? "attacker" : "defender";
}

std::vector<PartitionViolation> ValidatePartition(const GameState& state,
                                                  const Partition& partition) {
  std::vector<PartitionViolation> out;
  const std::size_t n = state.counts().size();
  if (partition.a.size() != n || partition.b.size() != n) {
    out.push_back({-1, "partition sides must have K+1 = " + std::to_string(n) +
                           " entries"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Count a = partition.a[i];
    const Count b = partition.b[i];
    const int level = static_cast<int>(i);
    if (a < 0 || b < 0) {
      out.push_back({level, "negative entry"});
    } else if (a + b != state[level]) {
      out.push_back({level, "a + b = " + std::to_string(a + b) +
                                " but state has " +
                                std::to_string(state[level])});
    }
  }
  return out;
}

std::optional<Player> Winner(const GameState& state) {
  if (state[state.K()] > 0) return Player::kAttacker;
  if (state.empty()) return Player::kDefender;
  return std::nullopt;
}

GameState ApplyMove(const GameState& state, const Partition& partition,
                    Side destroy) {
  if (IsTerminal(state)) throw StateError("move on a terminal state");
  const auto violations = ValidatePartition(state, partition);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ValidationError("invalid partition at level " +
                          std::to_string(v.level) + ": " + v.reason);
  }
  const auto& survivors = partition.side(Other(destroy));
  const int K = state.K();
  std::vector<Count> next(K + 1, 0);
  // survivors[K] is zero here: the state is non-terminal.
  for (int i = 0; i < K; ++i) next[i + 1] = survivors[i];
  return GameState(K, std::move(next));
}

MatchRecord PlayMatch(const AttackerPolicy& attacker,
                      const DefenderPolicy& defender, const GameState& start,
                      std::uint64_t seed) {
  if (IsTerminal(start)) throw StateError("match must start non-terminal");
  MatchRecord record;
  record.start = start;
  record.seed = seed;
  Rng rng(seed);
  GameState state = start;
  auto forfeit = [&](Player culprit, std::string reason) {
    record.fault = MatchFault{culprit, std::move(reason)};
    record.outcome = {Other(culprit), static_cast<int>(record.steps.size())};
    return record;
  };
  while (!IsTerminal(state)) {
    Partition partition;
    try {
      partition = attacker(state, rng);
    } catch (const std::exception& e) {
      return forfeit(Player::kAttacker, e.what());
    }
    const auto violations = ValidatePartition(state, partition);
    if (!violations.empty()) {
      return forfeit(Player::kAttacker,
                     "invalid partition at level " +
                         std::to_string(violations.front().level) + ": " +
                         violations.front().reason);
    }
    Side choice;
    try {
      choice = defender(partition, rng);
    } catch (const std::exception& e) {
      return forfeit(Player::kDefender, e.what());
    }
    GameState next = ApplyMove(state, partition, choice);
    record.steps.push_back({std::move(state), std::move(partition), choice});
    state = std::move(next);
  }
  record.outcome = {*Winner(state), static_cast<int>(record.steps.size())};
  return record;
}

Outcome Replay(const MatchRecord& record) {
  GameState state = record.start;
  for (const Step& step : record.steps) {
    if (!(step.state == state)) {
      throw ValidationError("recorded step does not follow from its parent");
    }
    state = ApplyMove(state, step.partition, step.destroyed);
  }
  if (record.fault) {
    return {Other(record.fault->culprit), static_cast<int>(record.steps.size())};
  }
  const auto winner = Winner(state);
  if (!winner) throw StateError("recorded match did not reach a terminal state");
  return {*winner, static_cast<int>(record.steps.size())};
}

}  // namespace ess
