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

#ifndef ESS_GAME_HPP_
#define ESS_GAME_HPP_

// Rules of the attacker-defender (tenure) game.
//
// A board has levels 0..K. Each turn the attacker splits the pieces in play
// into two sets A and B, the defender destroys one of them, and every piece
// of the surviving set moves up one level. The attacker wins as soon as a
// piece sits on level K; the defender wins when no pieces remain.
//
// Potentials are exact integers in units of 2^-K: a piece on level i is worth
// 2^i units, and potential 1 is 2^K units. Nothing in this header uses
// floating point.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ess/rng.hpp"

namespace ess {

using Count = std::int64_t;
using Units = std::int64_t;

// Largest supported K. Piece weights go up to 2^K units and all potentials
// are kept below kMaxUnits, so sums of a handful of them cannot overflow.
inline constexpr int kMaxLevels = 30;
inline constexpr Units kMaxUnits = Units{1} << 62;

// Units of the threshold potential 1 (resp. 1/2) at a given K.
constexpr Units UnitOne(int K) { return Units{1} << K; }
constexpr Units UnitHalf(int K) { return Units{1} << (K - 1); }

// Throws ValidationError unless 1 <= K <= kMaxLevels.
void CheckLevelCount(int K);

// Exact potential of a count vector (index = level), in units of 2^-K where
// K = counts.size() - 1. Throws ArithmeticBoundError past kMaxUnits and
// ValidationError on negative counts.
Units PotentialOf(std::span<const Count> counts);

struct GameParams {
  int K = 5;
  Units start_potential = 30;
  static constexpr int kMaxKSupported = kMaxLevels;

  void Validate() const;
};

class GameState {
 public:
  // All-zero board.
  explicit GameState(int K);
  // Throws ValidationError for a bad K, a length other than K+1, or a
  // negative entry.
  GameState(int K, std::vector<Count> counts);

  int K() const { return K_; }
  const std::vector<Count>& counts() const { return counts_; }
  Count operator[](int level) const { return counts_[level]; }
  Count num_pieces() const;
  bool empty() const { return num_pieces() == 0; }

  bool operator==(const GameState&) const = default;

 private:
  int K_;
  std::vector<Count> counts_;
};

Units Potential(const GameState& state);

enum class Side { kA, kB };
enum class Player { kAttacker, kDefender };

constexpr Side Other(Side s) { return s == Side::kA ? Side::kB : Side::kA; }
constexpr Player Other(Player p) {
  return p == Player::kAttacker ? Player::kDefender : Player::kAttacker;
}
const char* ToString(Side s);
const char* ToString(Player p);

// The attacker's move: two count vectors, each of length K+1.
struct Partition {
  std::vector<Count> a;
  std::vector<Count> b;

  int K() const { return static_cast<int>(a.size()) - 1; }
  const std::vector<Count>& side(Side s) const { return s == Side::kA ? a : b; }
  bool operator==(const Partition&) const = default;
};

Units Potential(const Partition& p, Side side);

struct PartitionViolation {
  int level;  // -1 when the vector lengths themselves are wrong
  std::string reason;
  bool operator==(const PartitionViolation&) const = default;
};

// Every index where a[i] + b[i] != counts[i] or an entry is negative. Empty
// result means the partition is legal. Empty sides are legal.
std::vector<PartitionViolation> ValidatePartition(const GameState& state,
                                                  const Partition& partition);

// Attacker if a piece sits on level K, Defender if the board is empty.
std::optional<Player> Winner(const GameState& state);
inline bool IsTerminal(const GameState& state) {
  return Winner(state).has_value();
}

// Destroys one side and advances the other by one level. Throws StateError
// on a terminal state and ValidationError on an illegal partition.
GameState ApplyMove(const GameState& state, const Partition& partition,
                    Side destroy);

struct Outcome {
  Player winner = Player::kDefender;
  int turns_played = 0;
  bool operator==(const Outcome&) const = default;
};

struct Step {
  GameState state;
  Partition partition;
  Side destroyed;
  bool operator==(const Step&) const = default;
};

// Set when a policy misbehaved; the match is then forfeited by `culprit`.
struct MatchFault {
  Player culprit;
  std::string reason;
  bool operator==(const MatchFault&) const = default;
};

struct MatchRecord {
  GameState start{1};
  std::vector<Step> steps;
  Outcome outcome;
  std::uint64_t seed = 0;
  std::optional<MatchFault> fault;
  bool operator==(const MatchRecord&) const = default;
};

// Policies receive the match RNG so scripted randomness is reproducible.
using AttackerPolicy = std::function<Partition(const GameState&, Rng&)>;
using DefenderPolicy = std::function<Side(const Partition&, Rng&)>;

// Plays one match from `start` with a fresh RNG seeded by `seed`. Policy
// exceptions and illegal partitions end the match with a fault record.
// Throws StateError if `start` is already terminal.
MatchRecord PlayMatch(const AttackerPolicy& attacker,
                      const DefenderPolicy& defender, const GameState& start,
                      std::uint64_t seed);

// Re-applies the recorded steps; returns the outcome they imply.
Outcome Replay(const MatchRecord& record);

}  // namespace ess

#endif  // ESS_GAME_HPP_
