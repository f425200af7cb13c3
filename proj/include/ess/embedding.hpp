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

#ifndef ESS_EMBEDDING_HPP_
#define ESS_EMBEDDING_HPP_

#include <vector>

#include "ess/game.hpp"

namespace ess {

// Top-aligned embedding of a K_small board into a K_big board: level i moves
// to level i + (K_big - K_small). A piece's weight depends only on its
// distance to the top, so the real-valued potential is unchanged. Throws
// ConfigError when K_small > K_big.
GameState CrossKEmbed(const GameState& state, int K_big);
std::vector<Count> CrossKEmbed(const std::vector<Count>& counts, int K_big);
Partition CrossKEmbed(const Partition& partition, int K_big);

}  // namespace ess

#endif  // ESS_EMBEDDING_HPP_
