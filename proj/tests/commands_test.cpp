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

#include <gtest/gtest.h>

#include "ess/commands.hpp"
#include "ess/errors.hpp"

namespace ess {
namespace {

using nlohmann::json;

TEST(CommandsTest, AllNamesAreRunnable) {
  for (const std::string& name : CommandNames()) {
    // Every handler rejects a non-object config with a config error.
    EXPECT_THROW(RunCommand(name, json::array()), ConfigError) << name;
  }
  EXPECT_THROW(RunCommand("fly", json::object()), ConfigError);
  EXPECT_THROW(RunCommand("play", {{"K", 3}}, 0), ConfigError);
}

TEST(CommandsTest, UnknownKeysAreRejected) {
  EXPECT_THROW(RunCommand("play", {{"K", 3}, {"gmaes", 5}}), ConfigError);
  EXPECT_THROW(RunCommand("enumerate", {{"K", 2}, {"potential_units", 4}, {"x", 1}}),
               ConfigError);
}

TEST(CommandsTest, PlayResolvesItsConfig) {
  const CommandResult r = RunCommand("play", {{"K", 3}, {"potential_units", 5}, {"games", 10}});
  EXPECT_EQ(r.config.at("attacker"), "prefix");
  EXPECT_EQ(r.config.at("defender"), "optimal");
  EXPECT_EQ(r.config.at("games"), 10);
  // Rerunning the resolved config gives the same outputs.
  const CommandResult again = RunCommand("play", r.config);
  ASSERT_EQ(again.outputs.size(), r.outputs.size());
  for (std::size_t i = 0; i < r.outputs.size(); ++i) {
    EXPECT_EQ(again.outputs[i].content, r.outputs[i].content);
  }
}

TEST(CommandsTest, EnumerateCountsMatch) {
  const CommandResult r = RunCommand("enumerate", {{"K", 3}, {"potential_units", 8}});
  bool found = false;
  for (const auto& o : r.outputs) {
    if (o.file == "count.txt") {
      EXPECT_EQ(o.content, "10\n");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(CommandsTest, PotentialMustBeExact) {
  EXPECT_THROW(RunCommand("enumerate", {{"K", 2}, {"potential", 0.3}}), ConfigError);
  const CommandResult r = RunCommand("enumerate", {{"K", 2}, {"potential", 0.75}});
  EXPECT_EQ(r.config.at("potential_units"), 3);
}

}  // namespace
}  // namespace ess
