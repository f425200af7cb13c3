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

#include "ess/embedding.hpp"

#include "ess/errors.hpp"

namespace ess {

std::vector<Count> CrossKEmbed(const std::vector<Count>& counts, int K_big) {
  const int K_small = static_cast<int>(counts.size()) - 1;
  CheckLevelCount(K_big);
  if (K_small > K_big) {
    throw ConfigError("cannot embed K=" + std::to_string(K_small) +
                      " into smaller K=" + std::to_string(K_big));
  }
  const int shift = K_big - K_small;
  std::vector<Count> out(K_big + 1, 0);
  for (int i = 0; i <= K_small; ++i) out[i + shift] = counts[i];
  return out;
}

GameState CrossKEmbed(const GameState& state, int K_big) {
  return GameState(K_big, CrossKEmbed(state.counts(), K_big));
}

Partition CrossKEmbed(const Partition& partition, int K_big) {
  return {CrossKEmbed(partition.a, K_big), CrossKEmbed(partition.b, K_big)};
}

}  // namespace ess
