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

#ifndef ESS_SELF_PLAY_HPP_
#define ESS_SELF_PLAY_HPP_

// One comparator ("which of two piece sets has higher potential?") drives
// both players: the defender destroys the set it calls larger, and the
// attacker binary-searches the prefix cut with it.

#include <functional>
#include <memory>
#include <vector>

#include "ess/game.hpp"
#include "ess/rng.hpp"

namespace ess {

struct TrainedAgent;

// Returns the side it believes has the larger potential.
using Comparator = std::function<Side(const std::vector<Count>& a,
                                      const std::vector<Count>& b, Rng& rng)>;

// A iff potential(A) > potential(B); B otherwise (ties included).
Comparator ExactComparator();
// A iff the agent scores destroying A above destroying B; exact ties are
// broken uniformly.
Comparator NetworkComparator(std::shared_ptr<const TrainedAgent> agent);

struct BinarySearchResult {
  Partition partition;
  int probes = 0;
  std::vector<Count> probe_cuts;
};

// Binary search over prefix cuts c in [0, N] (A = the c highest pieces).
// Probe c compares the top c pieces with everything below piece c+1; the
// boundary piece is held out. "B larger" means moving the piece into A keeps
// the split at least as balanced, so the search moves up, otherwise down.
// Uses at most ceil(log2(N + 1)) probes; the interval closes at one cut.
// With ExactComparator the result equals PrefixAttackerPartition.
BinarySearchResult BinarySearchPartition(const GameState& state,
                                         const Comparator& comparator, Rng& rng);

}  // namespace ess

#endif  // ESS_SELF_PLAY_HPP_
