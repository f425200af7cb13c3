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

// Subcommands shared by the C API and the command-line tool. Each one takes
// a JSON config, fills in every default so the resolved config alone
// reproduces the run, and returns its outputs as named files.

#ifndef ESS_COMMANDS_HPP_
#define ESS_COMMANDS_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace ess {

struct CommandOutput {
  std::string file;     // name inside the output directory
  std::string content;
};

struct CommandResult {
  nlohmann::json config;  // fully resolved
  std::string summary;    // short human-readable report
  std::vector<CommandOutput> outputs;
};

// play, train, selfplay, multiagent, eval, analyze, enumerate, dataset.
const std::vector<std::string>& CommandNames();

// Throws ConfigError for unknown subcommands or bad configs. `workers` only
// changes speed, never results.
CommandResult RunCommand(const std::string& subcommand, const nlohmann::json& config,
                         int workers = 1);

// Writes every output plus manifest.json (subcommand, resolved config, its
// hash, and the hash of each output) into `out_dir`, creating it.
void WriteCommandResult(const std::string& subcommand, const CommandResult& result,
                        const std::string& out_dir);

// Accepts either a bare config or a manifest written by WriteCommandResult.
// A manifest for a different subcommand is a ConfigError.
nlohmann::json ConfigFromFile(const std::string& subcommand, const std::string& path);

}  // namespace ess

#endif  // ESS_COMMANDS_HPP_
