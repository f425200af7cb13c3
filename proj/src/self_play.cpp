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

#include "ess/self_play.hpp"

#include "ess/agent.hpp"
#include "ess/errors.hpp"
#include "ess/strategies.hpp"

namespace ess {

Comparator ExactComparator() {
  return [](const std::vector<Count>& a, const std::vector<Count>& b, Rng&) {
    return PotentialOf(a) > PotentialOf(b) ? Side::kA : Side::kB;
  };
}

Comparator NetworkComparator(std::shared_ptr<const TrainedAgent> agent) {
  if (agent->role == Role::kAttacker) {
    throw ConfigError("an attacker agent cannot compare sets");
  }
  return [agent](const std::vector<Count>& a, const std::vector<Count>& b,
                 Rng& rng) {
    const nn::Vector scores = DefenderScores(*agent, Partition{a, b});
    return ArgmaxRandomTies(scores, rng) == 0 ? Side::kA : Side::kB;
  };
}

BinarySearchResult BinarySearchPartition(const GameState& state,
                                         const Comparator& comparator, Rng& rng) {
  if (IsTerminal(state)) throw StateError("binary search on a terminal state");
  BinarySearchResult result;
  Count lo = 0;
  Count hi = state.num_pieces();
  while (lo < hi) {
    const Count mid = lo + (hi - lo) / 2;
    const Partition with_a = PrefixCut(state, mid);
    const Partition with_b = PrefixCut(state, mid + 1);
    ++result.probes;
    result.probe_cuts.push_back(mid);
    if (comparator(with_a.a, with_b.b, rng) == Side::kB) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  result.partition = PrefixCut(state, lo);
  return result;
}

}  // namespace ess
