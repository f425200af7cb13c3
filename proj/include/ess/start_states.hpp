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

#ifndef ESS_START_STATES_HPP_
#define ESS_START_STATES_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ess/game.hpp"
#include "ess/rng.hpp"

namespace ess {

using BigCount = boost::multiprecision::cpp_int;

// Converts a real potential into units of 2^-K. Throws ConfigError unless
// potential * 2^K is a whole number: 0.95 at K=5 is 30.4 units and is
// rejected, the caller has to ask for 30 units explicitly.
Units UnitsFromPotential(double potential, int K);

struct StartDistribution {
  enum class Kind {
    kLevel0,          // every piece on level 0
    kRandomSpread,    // pieces on random levels below K
    kSingleLevel,     // bulk of the potential on one random level
  };
  Kind kind = Kind::kRandomSpread;
  int K = 5;
  Units target_units = 30;

  // "level0", "spread" / "random-spread", "single" / "single-level".
  static Kind ParseKind(std::string_view name);
  static std::string KindName(Kind kind);
  void Validate() const;
};

// Draws a start state whose potential is exactly dist.target_units. No piece
// is ever placed on level K.
GameState SampleStartState(const StartDistribution& dist, Rng& rng);

inline constexpr int kMaxEnumerationK = 8;
inline constexpr int kMaxCountK = 20;
// Largest target accepted by CountStates (the table has one entry per unit).
inline constexpr Units kMaxCountUnits = Units{1} << 21;

// Calls `visit` for every state with potential exactly `target` units, in
// lexicographic order of (n_K, n_{K-1}, ..., n_0). Returns how many were
// visited. Throws ConfigError for K > kMaxEnumerationK.
std::uint64_t ForEachState(int K, Units target, bool forbid_top,
                           const std::function<void(const GameState&)>& visit);

std::vector<GameState> EnumerateStates(int K, Units target, bool forbid_top);

// Number of non-negative solutions of sum_i n_i 2^i = target over levels
// 0..K, by dynamic programming over levels.
BigCount CountStates(int K, Units target);

}  // namespace ess

#endif  // ESS_START_STATES_HPP_
