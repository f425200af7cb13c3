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

#include "ess/serialization.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "ess/errors.hpp"

namespace ess {

using nlohmann::json;

namespace {

Side ParseSide(const std::string& s) {
  if (s == "A") return Side::kA;
  if (s == "B") return Side::kB;
  throw ValidationError("unknown side '" + s + "'");
}

Player ParsePlayer(const std::string& s) {
  if (s == "attacker") return Player::kAttacker;
  if (s == "defender") return Player::kDefender;
  throw ValidationError("unknown player '" + s + "'");
}

// Wraps json access errors so callers only ever see ValidationError.
template <typename F>
auto Guard(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
}

}  // namespace

json ToJson(const GameState& state) {
  return json{{"K", state.K()}, {"counts", state.counts()}};
}

GameState GameStateFromJson(const json& j) {
  return Guard([&] {
    const int K = j.at("K").get<int>();
    const auto counts = j.at("counts").get<std::vector<Count>>();
    if (static_cast<int>(counts.size()) != K + 1) {
      throw ValidationError("state needs K+1 counts");
    }
    return GameState(K, counts);
  });
}

json ToJson(const Partition& p) { return json{{"a", p.a}, {"b", p.b}}; }

Partition PartitionFromJson(const json& j) {
  return Guard([&] {
    return Partition{j.at("a").get<std::vector<Count>>(),
                     j.at("b").get<std::vector<Count>>()};
  });
}

json ToJson(const MatchRecord& r) {
  json steps = json::array();
  for (const Step& s : r.steps) {
    steps.push_back({{"state", ToJson(s.state)},
                     {"partition", ToJson(s.partition)},
                     {"destroyed", ToString(s.destroyed)}});
  }
  json j{{"seed", r.seed},
         {"start", ToJson(r.start)},
         {"steps", steps},
         {"winner", ToString(r.outcome.winner)},
         {"turns", r.outcome.turns_played}};
  if (r.fault) {
    j["fault"] = {{"culprit", ToString(r.fault->culprit)}, {"reason", r.fault->reason}};
  }
  return j;
}

MatchRecord MatchRecordFromJson(const json& j) {
  return Guard([&] {
    MatchRecord r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.start = GameStateFromJson(j.at("start"));
    for (const json& s : j.at("steps")) {
      r.steps.push_back({GameStateFromJson(s.at("state")),
                         PartitionFromJson(s.at("partition")),
                         ParseSide(s.at("destroyed").get<std::string>())});
    }
    r.outcome.winner = ParsePlayer(j.at("winner").get<std::string>());
    r.outcome.turns_played = j.at("turns").get<int>();
    if (j.contains("fault")) {
      r.fault = MatchFault{ParsePlayer(j.at("fault").at("culprit").get<std::string>()),
                           j.at("fault").at("reason").get<std::string>()};
    }
    return r;
  });
}

void WriteRecords(const std::vector<MatchRecord>& records, std::ostream& out) {
  for (const MatchRecord& r : records) out << ToJson(r).dump() << "\n";
}

std::vector<MatchRecord> ReadRecords(std::istream& in) {
  std::vector<MatchRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("record line is not JSON: ") + e.what());
    }
    records.push_back(MatchRecordFromJson(j));
  }
  return records;
}

}  // namespace ess
