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

// Command-line entry point. Flags are folded into a JSON config on top of
// --config (a bare config or a manifest) and handed to the library.

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ess/ess.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;
  int workers = 1;
};

// Flags that were not given stay unset and leave the config untouched.
struct EnvFlags {
  std::optional<int> K;
  std::optional<std::int64_t> units;
  std::optional<double> potential;
  std::optional<std::string> start;
  std::optional<std::string> opponent;

  void Add(CLI::App* app, bool with_opponent = true) {
    app->add_option("--K", K, "number of levels");
    app->add_option("--potential-units", units, "start potential in units of 2^-K");
    app->add_option("--potential", potential,
                    "start potential; must resolve to whole units");
    app->add_option("--start", start,
                    "start distribution: level0|spread|single, optionally "
                    "followed by :units=N or :potential=X");
    if (with_opponent) app->add_option("--opponent", opponent, "opponent policy");
  }

  // Writes into an env-shaped object.
  void Apply(json& env) const {
    if (K) env["K"] = *K;
    if (start) {
      const auto colon = start->find(':');
      env["start"] = start->substr(0, colon);
      if (colon != std::string::npos) {
        const std::string arg = start->substr(colon + 1);
        if (arg.rfind("units=", 0) == 0) {
          SetUnits(env, std::stoll(arg.substr(6)));
        } else if (arg.rfind("potential=", 0) == 0) {
          SetPotential(env, std::stod(arg.substr(10)));
        } else {
          throw CLI::ValidationError("--start", "expected units=N or potential=X after ':'");
        }
      }
    }
    if (units && potential) {
      throw CLI::ValidationError("--potential", "give --potential or --potential-units, not both");
    }
    if (units) SetUnits(env, *units);
    if (potential) SetPotential(env, *potential);
    if (opponent) env["opponent"] = *opponent;
  }

  static void SetUnits(json& env, std::int64_t u) {
    env.erase("potential");
    env["potential_units"] = u;
  }
  static void SetPotential(json& env, double p) {
    env.erase("potential_units");
    env["potential"] = p;
  }
};

struct TrainFlags {
  std::optional<std::string> algo, role, arch;
  std::optional<std::int64_t> steps, eval_interval;
  std::optional<int> eval_games, agent_K;
  std::optional<double> lr;
  bool normalize = false;

  void Add(CLI::App* app, bool with_role = true) {
    app->add_option("--algo", algo, "value|policy-grad|actor-critic|random-search");
    if (with_role) app->add_option("--role", role, "defender|attacker");
    app->add_option("--arch", arch, "linear|mlp2x300");
    app->add_option("--steps", steps, "training steps");
    app->add_option("--lr", lr, "learning rate");
    app->add_option("--agent-K", agent_K, "network K when larger than the board");
    app->add_option("--eval-interval", eval_interval, "steps between curve points");
    app->add_option("--eval-games", eval_games, "games per curve point");
    app->add_flag("--normalize-obs", normalize, "scale observations by level weight");
  }

  void Apply(json& c) const {
    if (algo) c["algorithm"] = *algo;
    if (role) c["role"] = *role;
    if (arch) c["arch"] = *arch;
    if (steps) c["total_steps"] = *steps;
    if (lr) c["learning_rate"] = *lr;
    if (agent_K) c["agent_K"] = *agent_K;
    if (eval_interval) c["eval_interval"] = *eval_interval;
    if (eval_games) c["eval_games"] = *eval_games;
    if (normalize) c["normalize_obs"] = true;
  }
};

json& Obj(json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_object()) j[key] = json::object();
  return j[key];
}

int Fail(int code, const std::string& reason) {
  std::fprintf(stderr, "error: %s\n", reason.c_str());
  return code;
}

int ExitFor(ess_status s) {
  return s == ESS_ERR_CONFIG || s == ESS_ERR_VALIDATION ? kExitConfig : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ESS attacker-defender games: play, train, evaluate, analyze"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ess_version()));

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "seed for all randomness");
    sub->add_option("--out", common.out, "output directory (default: out/<subcommand>)");
    sub->add_option("--config", common.config, "JSON config or a manifest.json to rerun");
    sub->add_option("--workers", common.workers, "parallel workers; results do not depend on it")
        ->check(CLI::PositiveNumber);
  };

  // Each subcommand contributes a function that edits the config.
  std::map<std::string, std::function<void(json&)>> apply;

  // play
  auto* play = app.add_subcommand("play", "play scripted or trained policies against each other");
  EnvFlags play_env;
  std::optional<std::string> play_att, play_def;
  std::optional<int> play_games;
  bool play_no_record = false;
  play_env.Add(play, false);
  play->add_option("--attacker", play_att, "prefix|optimal|disjoint|mixed[:p]|policy:<file>");
  play->add_option("--defender", play_def, "optimal|random|policy:<file>");
  play->add_option("--games", play_games, "number of matches");
  play->add_flag("--no-record", play_no_record, "skip matches.jsonl");
  apply["play"] = [&](json& c) {
    play_env.Apply(c);
    if (play_att) c["attacker"] = *play_att;
    if (play_def) c["defender"] = *play_def;
    if (play_games) c["games"] = *play_games;
    if (play_no_record) c["record"] = false;
    if (common.seed) c["seed"] = *common.seed;
  };

  // train
  auto* train = app.add_subcommand("train", "train an attacker or defender");
  EnvFlags train_env;
  TrainFlags train_flags;
  train_env.Add(train);
  train_flags.Add(train);
  apply["train"] = [&](json& c) {
    train_flags.Apply(c);
    train_env.Apply(Obj(c, "env"));
    if (common.seed) c["seed"] = *common.seed;
  };

  // selfplay
  auto* selfplay = app.add_subcommand("selfplay", "train one network as both players");
  EnvFlags sp_env;
  TrainFlags sp_flags;
  std::optional<int> sp_samples;
  sp_env.Add(selfplay);
  sp_flags.Add(selfplay, false);
  selfplay->add_option("--accuracy-samples", sp_samples, "random partitions for the accuracy check");
  apply["selfplay"] = [&](json& c) {
    sp_flags.Apply(c);
    sp_env.Apply(Obj(c, "env"));
    if (sp_samples) c["accuracy_samples"] = *sp_samples;
    if (common.seed) c["seed"] = *common.seed;
  };

  // multiagent
  auto* multi = app.add_subcommand("multiagent", "train attacker and defender against each other");
  EnvFlags ma_env;
  TrainFlags ma_flags;
  std::optional<std::int64_t> ma_switch;
  ma_env.Add(multi, false);
  ma_flags.Add(multi, false);
  multi->add_option("--switch-every", ma_switch, "steps before the training role switches");
  apply["multiagent"] = [&](json& c) {
    for (const char* role : {"attacker", "defender"}) {
      json& r = Obj(c, role);
      TrainFlags f = ma_flags;
      f.steps.reset();
      f.Apply(r);
      ma_env.Apply(Obj(r, "env"));
      if (common.seed) {
        // Distinct streams for the two networks.
        r["seed"] = std::string(role) == "defender" ? *common.seed : *common.seed + 1;
      }
    }
    if (ma_flags.steps) c["total_steps"] = *ma_flags.steps;
    if (ma_switch) c["switch_every"] = *ma_switch;
  };

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a weight file or a scripted defender");
  EnvFlags ev_env;
  std::optional<std::string> ev_agent, ev_def;
  std::optional<int> ev_games;
  ev_env.Add(eval);
  eval->add_option("--agent", ev_agent, "agent weight file");
  eval->add_option("--defender", ev_def, "scripted defender: optimal|random");
  eval->add_option("--games", ev_games, "number of games");
  apply["eval"] = [&](json& c) {
    ev_env.Apply(Obj(c, "env"));
    if (ev_agent) c["agent"] = *ev_agent;
    if (ev_def) c["defender"] = *ev_def;
    if (ev_games) c["games"] = *ev_games;
    if (common.seed) c["seed"] = *common.seed;
  };

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "compare|nullset|calibration|experiment diagnostics");
  std::optional<std::string> an_mode, an_agent, an_spec;
  std::optional<int> an_K, an_games, an_partitions;
  std::optional<std::vector<int>> an_Ks;
  std::optional<std::int64_t> an_steps;
  EnvFlags an_env;
  an_env.Add(analyze);
  analyze->add_option("--mode", an_mode, "compare|nullset|calibration|experiment");
  analyze->add_option("--agent", an_agent, "agent weight file (nullset, calibration)");
  analyze->add_option("--spec", an_spec, "experiment spec file (experiment)");
  analyze->add_option("--Ks", an_Ks, "board sizes (compare)")->expected(1, -1);
  analyze->add_option("--games", an_games, "graded games per agent (compare)");
  analyze->add_option("--steps", an_steps, "RL training steps (compare)");
  analyze->add_option("--partitions", an_partitions, "random partitions (calibration)");
  apply["analyze"] = [&](json& c) {
    if (an_mode) c["mode"] = *an_mode;
    const std::string mode = c.value("mode", std::string());
    if (an_agent) c["agent"] = *an_agent;
    if (an_spec) c["spec_file"] = *an_spec;
    if (an_games) c["games"] = *an_games;
    if (an_Ks) c["Ks"] = *an_Ks;
    if (an_partitions) c["partitions"] = *an_partitions;
    if (an_steps) Obj(c, "rl")["total_steps"] = *an_steps;
    if (mode == "nullset" && an_env.K) c["K"] = *an_env.K;
    if (mode == "calibration") an_env.Apply(Obj(c, "env"));
    if (common.seed) {
      if (mode == "compare") {
        c["seeds"] = {*common.seed};
      } else if (mode == "calibration") {
        c["seed"] = *common.seed;
      }
    }
  };

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list and count states of a given potential");
  EnvFlags en_env;
  bool en_forbid_top = false;
  en_env.Add(enumerate, false);
  enumerate->add_flag("--forbid-top", en_forbid_top, "exclude states with a piece on level K");
  apply["enumerate"] = [&](json& c) {
    json env = json::object();
    en_env.Apply(env);
    for (const char* k : {"K", "potential_units", "potential"}) {
      if (env.contains(k)) {
        c.erase("potential_units");
        c.erase("potential");
        break;
      }
    }
    for (auto& [k, v] : env.items()) {
      if (k != "start") c[k] = v;
    }
    if (en_forbid_top) c["forbid_top"] = true;
  };

  // dataset
  auto* dataset = app.add_subcommand("dataset", "oracle-labeled defender moves as CSV");
  std::optional<std::string> ds_source, ds_records;
  std::optional<int> ds_n;
  bool ds_normalize = false;
  EnvFlags ds_env;
  ds_env.Add(dataset);
  dataset->add_option("--source", ds_source, "records|train|uniform");
  dataset->add_option("--records", ds_records, "matches.jsonl from play (records)");
  dataset->add_option("--n", ds_n, "rows (uniform)");
  dataset->add_flag("--normalize-obs", ds_normalize, "scale observations by level weight");
  apply["dataset"] = [&](json& c) {
    if (ds_source) c["source"] = *ds_source;
    const std::string source = c.value("source", std::string("records"));
    if (ds_records) c["records"] = *ds_records;
    if (ds_n) c["n"] = *ds_n;
    if (ds_normalize) c["normalize_obs"] = true;
    if (source == "uniform") {
      ds_env.Apply(Obj(c, "env"));
      if (common.seed) c["seed"] = *common.seed;
    } else if (source == "train") {
      ds_env.Apply(Obj(Obj(c, "train"), "env"));
      if (common.seed) Obj(c, "train")["seed"] = *common.seed;
    }
  };

  for (CLI::App* sub : {play, train, selfplay, multi, eval, analyze, enumerate, dataset}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();

  json config = json::object();
  if (!common.config.empty()) {
    char* text = nullptr;
    const ess_status s = ess_config_from_file(name.c_str(), common.config.c_str(), &text);
    if (s != ESS_OK) return Fail(ExitFor(s), ess_last_error());
    config = json::parse(text);
    ess_string_free(text);
  }
  try {
    apply.at(name)(config);
  } catch (const CLI::Error& e) {
    return Fail(kExitConfig, e.what());
  } catch (const std::exception& e) {
    return Fail(kExitConfig, std::string("bad flag value: ") + e.what());
  }

  const std::string out = common.out.empty() ? "out/" + name : common.out;
  char* summary = nullptr;
  const ess_status s =
      ess_run_command(name.c_str(), config.dump().c_str(), out.c_str(), common.workers, &summary);
  if (s != ESS_OK) return Fail(ExitFor(s), ess_last_error());
  std::printf("%s\n", summary);
  std::printf("outputs written to %s\n", out.c_str());
  ess_string_free(summary);
  return kExitOk;
}
