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

// JSON forms of states and match records. Records are written one per line.

#ifndef ESS_SERIALIZATION_HPP_
#define ESS_SERIALIZATION_HPP_

#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "ess/game.hpp"

namespace ess {

// {"K": 2, "counts": [0, 4, 0]}
nlohmann::json ToJson(const GameState& state);
GameState GameStateFromJson(const nlohmann::json& j);

// {"a": [...], "b": [...]}
nlohmann::json ToJson(const Partition& partition);
Partition PartitionFromJson(const nlohmann::json& j);

// {"seed", "start", "steps": [{"state", "partition", "destroyed"}], "winner",
//  "turns", "fault"?: {"culprit", "reason"}}
nlohmann::json ToJson(const MatchRecord& record);
MatchRecord MatchRecordFromJson(const nlohmann::json& j);

void WriteRecords(const std::vector<MatchRecord>& records, std::ostream& out);
std::vector<MatchRecord> ReadRecords(std::istream& in);

}  // namespace ess

#endif  // ESS_SERIALIZATION_HPP_
