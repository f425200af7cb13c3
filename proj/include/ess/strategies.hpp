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

#ifndef ESS_STRATEGIES_HPP_
#define ESS_STRATEGIES_HPP_

// Scripted players: the potential-based optimal defender, the balanced
// prefix attacker, and the sub-optimal attackers used for exploration.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ess/game.hpp"
#include "ess/rng.hpp"

namespace ess {

// Exact rational in (0, 1), e.g. a target share of the total potential.
struct Fraction {
  std::int64_t num = 1;
  std::int64_t den = 10;
  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Fraction&) const = default;
};

// Parses a decimal such as "0.25" exactly (into 25/100).
Fraction ParseFraction(std::string_view text);
std::string ToString(const Fraction& f);

inline const std::vector<Fraction>& DefaultFractionMenu() {
  static const std::vector<Fraction> menu = {{1, 10}, {2, 10}, {3, 10}, {4, 10}};
  return menu;
}

inline constexpr double kDefaultMixPOptimal = 0.8;

struct AttackerKind {
  enum class Kind { kPrefix, kDisjointSupport, kMixed };
  Kind kind = Kind::kPrefix;
  double mix_p_optimal = kDefaultMixPOptimal;
  std::vector<Fraction> fraction_menu = DefaultFractionMenu();

  // Accepts "prefix", "optimal", "disjoint", "mixed" and "mixed:<p>".
  static AttackerKind Parse(std::string_view name);
  std::string Name() const;
  void Validate() const;
};

// Destroys the side with strictly higher potential; A on a tie.
Side OptimalDefenderChoice(const Partition& partition);

Side RandomDefenderChoice(Rng& rng);

// Splits the pieces, sorted by level from the top, after the first
// `num_in_a` of them: A receives the top pieces, B the rest.
Partition PrefixCut(const GameState& state, Count num_in_a);

// Each level's pieces split between A and B with a uniform count for A.
Partition RandomSplit(const GameState& state, Rng& rng);

// The prefix cut maximizing min(potential(A), potential(B)). Among equally
// balanced cuts the one giving A more pieces wins, so a lone piece goes to A.
// With potential >= 1 both sides reach potential 1/2. Throws StateError on a
// terminal state.
Partition PrefixAttackerPartition(const GameState& state);

// The prefix cut whose suffix side B has potential closest to
// share * potential(state); on a tie the smaller B is chosen.
Partition DisjointSupportPartition(const GameState& state, Fraction share);

// Draws the share uniformly from `menu` and delegates to the overload above.
Partition DisjointSupportPartition(
    const GameState& state, Rng& rng,
    const std::vector<Fraction>& menu = DefaultFractionMenu());

// Per-move mixture: prefix with probability p_optimal, else disjoint support.
Partition MixedAttackerPartition(
    const GameState& state, Rng& rng, double p_optimal,
    const std::vector<Fraction>& menu = DefaultFractionMenu());

AttackerPolicy MakeAttackerPolicy(const AttackerKind& kind);
DefenderPolicy OptimalDefenderPolicy();
DefenderPolicy RandomDefenderPolicy();

}  // namespace ess

#endif  // ESS_STRATEGIES_HPP_
