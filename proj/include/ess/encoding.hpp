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

#ifndef ESS_ENCODING_HPP_
#define ESS_ENCODING_HPP_

// Network inputs and the attacker's level-valued action.

#include <vector>

#include "ess/game.hpp"
#include "ess/nn.hpp"

namespace ess {

enum class ObsLayout {
  kDefenderConcat,  // counts of A then counts of B, 2(K+1) entries
  kAttackerState,   // counts of the state, K+1 entries
};

struct ObservationVec {
  ObsLayout layout = ObsLayout::kDefenderConcat;
  std::vector<double> values;
};

inline int DefenderObsDim(int K) { return 2 * (K + 1); }
inline int AttackerObsDim(int K) { return K + 1; }
inline int AttackerActionDim(int K) { return K + 1; }

// Raw counts unless `normalize`, which scales level i by 2^(i-K) so that
// the inputs are the per-level potentials.
ObservationVec EncodeDefenderObs(const Partition& partition, bool normalize = false);
ObservationVec EncodeAttackerObs(const GameState& state, bool normalize = false);

// Inverse of the raw-count defender encoding.
Partition DecodeDefenderObs(const ObservationVec& obs);

nn::Vector ToVector(const ObservationVec& obs);

// Attacker action `level`: A takes every piece above `level`, B every piece
// below, and the pieces on `level` are divided to make the two potentials as
// close as possible (on a tie the extra piece goes to B). Throws
// ValidationError for a level outside [0, K] and StateError on a terminal
// state.
Partition AttackerActionToPartition(const GameState& state, int level);

}  // namespace ess

#endif  // ESS_ENCODING_HPP_
