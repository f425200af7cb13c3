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

#include "ess/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "ess/agent.hpp"
#include "ess/analysis.hpp"
#include "ess/errors.hpp"
#include "ess/experiment.hpp"
#include "ess/hash.hpp"
#include "ess/rl.hpp"
#include "ess/serialization.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"

namespace ess {

using nlohmann::json;

namespace {

// Reads keys from a config object, remembering which were asked for so
// anything else can be rejected as a typo.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <typename T>
  T Get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    return Convert<T>(key);
  }

  template <typename T>
  T Need(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where_ + " needs '" + key + "'");
    return Convert<T>(key);
  }

  bool Has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& Raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void Done() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in " + where_);
    }
  }

 private:
  template <typename T>
  T Convert(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + ": bad value for '" + key + "': " + e.what());
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json ParseJson(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + " is not valid JSON: " + e.what());
  }
}

std::string Fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string CurveCsv(const std::vector<CurvePoint>& curve) {
  std::string out = "step,win_rate\n";
  for (const CurvePoint& p : curve) out += std::to_string(p.step) + "," + Fixed(p.win_rate) + "\n";
  return out;
}

std::string Setting(const EnvConfig& env) {
  return "K=" + std::to_string(env.K) + ";start=" + StartDistribution::KindName(env.start) +
         ";units=" + std::to_string(env.potential_units) + ";opponent=" + env.opponent;
}

// Potential in either exact units or as a real number that has to resolve
// to whole units.
Units ReadUnits(Reader& r, int K) {
  const bool units = r.Has("potential_units");
  const bool real = r.Has("potential");
  if (units && real) throw ConfigError("give either potential or potential_units, not both");
  if (real) return UnitsFromPotential(r.Need<double>("potential"), K);
  return r.Need<Units>("potential_units");
}

double LastWinRate(const TrainedAgent& agent) {
  return agent.train_curve.empty() ? 0.0 : agent.train_curve.back().win_rate;
}

// ---------------------------------------------------------------------------

CommandResult Play(const json& in, int workers) {
  Reader r(in, "play config");
  const int K = r.Need<int>("K");
  const std::string attacker = r.Get<std::string>("attacker", "prefix");
  const std::string defender = r.Get<std::string>("defender", "optimal");
  const auto start = StartDistribution::ParseKind(r.Get<std::string>("start", "level0"));
  const Units units = ReadUnits(r, K);
  const int games = r.Get<int>("games", 100);
  const std::uint64_t seed = r.Get<std::uint64_t>("seed", 1);
  const bool record = r.Get<bool>("record", true);
  r.Done();
  if (games < 1) throw ConfigError("games must be positive");

  const StartDistribution dist{start, K, units};
  dist.Validate();
  const AttackerPolicy att = ResolveAttacker(attacker);
  const DefenderPolicy def = ResolveDefender(defender);
  (void)workers;

  std::vector<MatchRecord> records;
  std::int64_t attacker_wins = 0, faults = 0;
  for (int i = 0; i < games; ++i) {
    Rng start_rng(DeriveSeed(seed, 2 * static_cast<std::uint64_t>(i)));
    const GameState s0 = SampleStartState(dist, start_rng);
    MatchRecord m = PlayMatch(att, def, s0, DeriveSeed(seed, 2 * static_cast<std::uint64_t>(i) + 1));
    attacker_wins += m.outcome.winner == Player::kAttacker;
    faults += m.fault.has_value();
    if (record) records.push_back(std::move(m));
  }

  CommandResult res;
  res.config = {{"K", K},         {"attacker", attacker}, {"defender", defender},
                {"start", StartDistribution::KindName(start)},
                {"potential_units", units}, {"games", games}, {"seed", seed},
                {"record", record}};
  const std::int64_t defender_wins = games - attacker_wins;
  res.outputs.push_back(
      {"play.csv", "attacker,defender,K,start,potential_units,games,attacker_wins,defender_wins,faults\n" +
                       attacker + "," + defender + "," + std::to_string(K) + "," +
                       StartDistribution::KindName(start) + "," + std::to_string(units) + "," +
                       std::to_string(games) + "," + std::to_string(attacker_wins) + "," +
                       std::to_string(defender_wins) + "," + std::to_string(faults) + "\n"});
  if (record) {
    std::ostringstream out;
    WriteRecords(records, out);
    res.outputs.push_back({"matches.jsonl", out.str()});
  }
  res.summary = "attacker wins " + std::to_string(attacker_wins) + "/" + std::to_string(games) +
                ", defender wins " + std::to_string(defender_wins) + "/" +
                std::to_string(games);
  if (faults) res.summary += ", " + std::to_string(faults) + " forfeits";
  return res;
}

CommandResult TrainCmd(const json& in, int) {
  const TrainConfig config = TrainConfigFromJson(in);
  if (config.role == Role::kComparator) {
    throw ConfigError("comparator agents are trained with the selfplay subcommand");
  }
  const TrainedAgent agent = Train(config);
  CommandResult res;
  res.config = ToJson(config);
  res.outputs.push_back({"agent.json", SerializeAgent(agent)});
  res.outputs.push_back({"curve.csv", CurveCsv(agent.train_curve)});
  res.summary = AlgorithmName(config.algorithm) + " " + RoleName(config.role) + " after " +
                std::to_string(config.total_steps) + " steps: win rate " +
                Fixed(LastWinRate(agent)) + " on " + Setting(config.env);
  return res;
}

CommandResult SelfPlay(const json& in, int) {
  json train = in;
  int samples = 10000;
  if (train.is_object() && train.contains("accuracy_samples")) {
    try {
      samples = train.at("accuracy_samples").get<int>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad accuracy_samples: ") + e.what());
    }
    train.erase("accuracy_samples");
  }
  if (samples < 1) throw ConfigError("accuracy_samples must be positive");
  if (train.is_object() && !train.contains("role")) train["role"] = "comparator";
  const TrainConfig config = TrainConfigFromJson(train);
  if (config.role != Role::kComparator) throw ConfigError("selfplay trains comparator agents");
  const TrainedAgent agent = TrainSelfPlay(config);
  const double accuracy = ComparatorAccuracy(agent, config.env.start_distribution(), samples,
                                             DeriveSeed(config.seed, 11));
  CommandResult res;
  res.config = ToJson(config);
  res.config["accuracy_samples"] = samples;
  res.outputs.push_back({"agent.json", SerializeAgent(agent)});
  res.outputs.push_back({"curve.csv", CurveCsv(agent.train_curve)});
  res.outputs.push_back({"selfplay.csv", "setting,final_win_rate,comparator_accuracy,samples\n" +
                                             Setting(config.env) + "," +
                                             Fixed(LastWinRate(agent)) + "," +
                                             Fixed(accuracy) + "," + std::to_string(samples) +
                                             "\n"});
  res.summary = "self play: defender win rate " + Fixed(LastWinRate(agent)) +
                ", comparator accuracy " + Fixed(accuracy);
  return res;
}

CommandResult Multiagent(const json& in, int) {
  Reader r(in, "multiagent config");
  json att_json = r.Has("attacker") ? r.Raw("attacker") : json::object();
  json def_json = r.Has("defender") ? r.Raw("defender") : json::object();
  const std::int64_t total = r.Need<std::int64_t>("total_steps");
  const std::int64_t switch_every = r.Get<std::int64_t>("switch_every", total / 10);
  r.Done();
  if (att_json.is_object() && !att_json.contains("role")) att_json["role"] = "attacker";
  if (def_json.is_object() && !def_json.contains("role")) def_json["role"] = "defender";
  // The attacker's scripted opponent is never used; keep it valid.
  if (att_json.is_object() && att_json.contains("env") && att_json["env"].is_object() &&
      !att_json["env"].contains("opponent")) {
    att_json["env"]["opponent"] = "optimal";
  }
  const TrainConfig att = TrainConfigFromJson(att_json);
  const TrainConfig def = TrainConfigFromJson(def_json);
  const MultiagentResult out = TrainMultiagent(att, def, switch_every, total);

  // The same defender against the scripted prefix attacker, for contrast.
  EnvConfig vs_prefix = def.env;
  vs_prefix.opponent = "prefix";
  const EvalResult scripted =
      EvaluateAgent(out.defender, vs_prefix, def.eval_games, DeriveSeed(def.seed, 12));

  CommandResult res;
  res.config = {{"attacker", ToJson(att)},
                {"defender", ToJson(def)},
                {"switch_every", switch_every},
                {"total_steps", total}};
  res.outputs.push_back({"attacker.json", SerializeAgent(out.attacker)});
  res.outputs.push_back({"defender.json", SerializeAgent(out.defender)});
  std::string curve = "step,attacker_win_rate,defender_win_rate\n";
  for (std::size_t i = 0; i < out.defender.train_curve.size(); ++i) {
    curve += std::to_string(out.defender.train_curve[i].step) + "," +
             Fixed(out.attacker.train_curve[i].win_rate) + "," +
             Fixed(out.defender.train_curve[i].win_rate) + "\n";
  }
  res.outputs.push_back({"curve.csv", curve});
  res.outputs.push_back(
      {"multiagent.csv", "setting,defender_vs_trained_attacker,defender_vs_prefix_attacker\n" +
                             Setting(def.env) + "," + Fixed(LastWinRate(out.defender)) + "," +
                             Fixed(scripted.win_rate) + "\n"});
  res.summary = "defender win rate " + Fixed(LastWinRate(out.defender)) +
                " vs the trained attacker, " + Fixed(scripted.win_rate) +
                " vs the prefix attacker";
  return res;
}

CommandResult Eval(const json& in, int workers) {
  Reader r(in, "eval config");
  const std::string agent_path = r.Get<std::string>("agent", "");
  const std::string defender = r.Get<std::string>("defender", "");
  const EnvConfig env = EnvConfigFromJson(r.Has("env") ? r.Raw("env") : json::object());
  const int games = r.Get<int>("games", 1000);
  const std::uint64_t seed = r.Get<std::uint64_t>("seed", 1);
  r.Done();
  if (agent_path.empty() == defender.empty()) {
    throw ConfigError("eval needs exactly one of 'agent' (weight file) or 'defender' (scripted)");
  }
  if (games < 1) throw ConfigError("games must be positive");
  env.Validate();

  EvalResult result;
  std::int64_t step = 0;
  json config = {{"env", ToJson(env)}, {"games", games}, {"seed", seed}};
  if (!agent_path.empty()) {
    const TrainedAgent agent = LoadAgent(agent_path);
    if (!agent.train_curve.empty()) step = agent.train_curve.back().step;
    result = EvaluateAgent(agent, env, games, seed, workers);
    config["agent"] = agent_path;
  } else {
    result = EvaluateMatches(ResolveAttacker(env.opponent), ResolveDefender(defender),
                             env.start_distribution(), games, seed, Player::kDefender, workers);
    config["defender"] = defender;
  }
  CommandResult res;
  res.config = config;
  res.outputs.push_back(
      {"eval.csv", "setting,seed,step,games,win_rate,mean_reward,wilson_low,wilson_high\n" +
                       Setting(env) + "," + std::to_string(seed) + "," + std::to_string(step) +
                       "," + std::to_string(result.games) + "," + Fixed(result.win_rate) + "," +
                       Fixed(result.mean_reward) + "," + Fixed(result.wilson_low) + "," +
                       Fixed(result.wilson_high) + "\n"});
  res.summary = "win rate " + Fixed(result.win_rate) + " [" + Fixed(result.wilson_low) + ", " +
                Fixed(result.wilson_high) + "] over " + std::to_string(games) + " games";
  return res;
}

CommandResult AnalyzeCompare(Reader& r) {
  const auto Ks = r.Get<std::vector<int>>("Ks", {5, 10});
  const double fraction = r.Get<double>("start_fraction", 0.95);
  const auto seeds = r.Get<std::vector<std::uint64_t>>("seeds", {1});
  const int games = r.Get<int>("games", 1000);
  json rl_json = r.Has("rl") ? r.Raw("rl") : json::object();
  const json sup_in = r.Has("supervised") ? r.Raw("supervised") : json::object();
  r.Done();
  if (Ks.empty() || seeds.empty()) throw ConfigError("compare needs Ks and seeds");
  if (!(fraction > 0)) throw ConfigError("start_fraction must be positive");
  if (rl_json.is_object()) rl_json["role"] = "defender";
  const TrainConfig rl_base = TrainConfigFromJson(rl_json);

  Reader s(sup_in, "supervised config");
  SupervisedConfig sup;
  sup.epochs = s.Get<int>("epochs", sup.epochs);
  sup.batch_size = s.Get<int>("batch_size", sup.batch_size);
  sup.learning_rate = s.Get<double>("learning_rate", sup.learning_rate);
  sup.holdout_fraction = s.Get<double>("holdout_fraction", sup.holdout_fraction);
  s.Done();

  // Validate every K before the first (long) training run.
  std::vector<TrainConfig> configs;
  for (int K : Ks) {
    TrainConfig c = rl_base;
    c.env.K = K;
    c.env.potential_units = static_cast<Units>(std::llround(fraction * std::ldexp(1.0, K)));
    c.agent_K = 0;
    c.Validate();
    configs.push_back(c);
  }

  std::string compare = std::string(kMoveQualityHeader) + "\n";
  std::string supervised = "K,seed,train_rows,holdout_rows,train_accuracy,holdout_accuracy\n";
  for (const TrainConfig& base : configs) {
    for (std::uint64_t seed : seeds) {
      TrainConfig c = base;
      c.seed = seed;
      SupervisedConfig sc = sup;
      sc.seed = DeriveSeed(seed, 13);
      const ComparisonRun run = RunRlVsSupervised(c, sc, games);
      for (const MoveQuality& q : run.rows) compare += ToCsvRow(q) + "\n";
      supervised += std::to_string(c.env.K) + "," + std::to_string(seed) + "," +
                    std::to_string(run.supervised.train_rows) + "," +
                    std::to_string(run.supervised.holdout_rows) + "," +
                    Fixed(run.supervised.train_accuracy) + "," +
                    Fixed(run.supervised.holdout_accuracy) + "\n";
    }
  }
  json sup_json = {{"epochs", sup.epochs},
                   {"batch_size", sup.batch_size},
                   {"learning_rate", sup.learning_rate},
                   {"holdout_fraction", sup.holdout_fraction}};
  CommandResult res;
  res.config = {{"mode", "compare"}, {"Ks", Ks},       {"start_fraction", fraction},
                {"seeds", seeds},    {"games", games}, {"rl", ToJson(rl_base)},
                {"supervised", sup_json}};
  res.outputs.push_back({"compare.csv", compare});
  res.outputs.push_back({"supervised.csv", supervised});
  res.summary = compare;
  return res;
}

CommandResult AnalyzeNullSet(Reader& r) {
  const std::string path = r.Need<std::string>("agent");
  const TrainedAgent agent = LoadAgent(path);
  const int K = r.Get<int>("K", agent.K);
  r.Done();
  const double v = NullSetCheck(agent, K);
  CommandResult res;
  res.config = {{"mode", "nullset"}, {"agent", path}, {"K", K}};
  res.outputs.push_back(
      {"nullset.csv", "agent,K,violation_rate\n" + path + "," + std::to_string(K) + "," + Fixed(v) + "\n"});
  res.summary = "null-set violation rate " + Fixed(v);
  return res;
}

CommandResult AnalyzeCalibration(Reader& r) {
  const std::string path = r.Need<std::string>("agent");
  const EnvConfig env = EnvConfigFromJson(r.Has("env") ? r.Raw("env") : json::object());
  const int n = r.Get<int>("partitions", 10000);
  const std::uint64_t seed = r.Get<std::uint64_t>("seed", 1);
  r.Done();
  if (n < 0) throw ConfigError("partitions must be non-negative");
  env.Validate();
  const TrainedAgent agent = LoadAgent(path);
  Rng rng(seed);
  std::vector<Partition> partitions;
  for (int i = 0; i < n; ++i) {
    partitions.push_back(RandomSplit(SampleStartState(env.start_distribution(), rng), rng));
  }
  std::ostringstream out;
  CalibrationDump(agent, partitions, out);
  CommandResult res;
  res.config = {{"mode", "calibration"}, {"agent", path}, {"env", ToJson(env)},
                {"partitions", n},       {"seed", seed}};
  res.outputs.push_back({"calibration.csv", out.str()});
  res.summary = std::to_string(n) + " calibration rows";
  return res;
}

CommandResult AnalyzeExperiment(Reader& r, int workers) {
  json spec_json;
  if (r.Has("spec_file")) {
    const std::string path = r.Need<std::string>("spec_file");
    spec_json = ParseJson(ReadFile(path), path);
  } else {
    spec_json = r.Need<json>("spec");
  }
  r.Done();
  const ExperimentSpec spec = ExperimentSpecFromJson(spec_json);
  const ExperimentResult result = RunExperiment(spec, workers);
  CommandResult res;
  // The experiment file is inlined so the manifest alone reproduces the run.
  res.config = {{"mode", "experiment"}, {"spec", ToJson(spec)}};
  res.outputs.push_back({"rows.csv", RowsCsv(result)});
  res.outputs.push_back({"aggregate.csv", AggregateCsv(result)});
  res.summary = AggregateCsv(result);
  return res;
}

CommandResult Analyze(const json& in, int workers) {
  Reader r(in, "analyze config");
  const std::string mode = r.Need<std::string>("mode");
  if (mode == "compare") return AnalyzeCompare(r);
  if (mode == "nullset") return AnalyzeNullSet(r);
  if (mode == "calibration") return AnalyzeCalibration(r);
  if (mode == "experiment") return AnalyzeExperiment(r, workers);
  throw ConfigError("unknown analyze mode '" + mode +
                    "' (compare, nullset, calibration, experiment)");
}

CommandResult Enumerate(const json& in, int) {
  Reader r(in, "enumerate config");
  const int K = r.Need<int>("K");
  const Units units = ReadUnits(r, K);
  const bool forbid_top = r.Get<bool>("forbid_top", false);
  r.Done();
  CheckLevelCount(K);
  if (units < 0) throw ConfigError("potential_units must be non-negative");
  CommandResult res;
  res.config = {{"K", K}, {"potential_units", units}, {"forbid_top", forbid_top}};
  std::string lines;
  std::uint64_t listed = 0;
  if (K <= kMaxEnumerationK) {
    std::string jsonl;
    listed = ForEachState(K, units, forbid_top, [&](const GameState& s) {
      jsonl += ToJson(s).dump() + "\n";
      std::string row;
      for (Count c : s.counts()) row += (row.empty() ? "" : " ") + std::to_string(c);
      lines += row + "\n";
    });
    res.outputs.push_back({"states.jsonl", jsonl});
  }
  // Counting covers the whole board; with the top forbidden drop its share.
  BigCount count = CountStates(K, units);
  if (forbid_top && units >= UnitOne(K)) {
    count -= CountStates(K, units - UnitOne(K));
  }
  const std::string count_text = count.str();
  res.outputs.push_back({"count.txt", count_text + "\n"});
  res.summary = lines + count_text + " states";
  if (K <= kMaxEnumerationK && BigCount(listed) != count) {
    throw RuntimeFailure("enumeration and counting disagree");
  }
  return res;
}

CommandResult Dataset(const json& in, int) {
  Reader r(in, "dataset config");
  const std::string source = r.Get<std::string>("source", "records");
  const bool normalize = r.Get<bool>("normalize_obs", false);
  json config = {{"source", source}, {"normalize_obs", normalize}};
  std::vector<LabeledMove> rows;
  if (source == "records") {
    const std::string path = r.Need<std::string>("records");
    r.Done();
    std::istringstream text(ReadFile(path));
    rows = BuildSupervisedDataset(ReadRecords(text), normalize);
    config["records"] = path;
  } else if (source == "train") {
    const TrainConfig c = TrainConfigFromJson(r.Need<json>("train"));
    r.Done();
    if (c.role != Role::kDefender) throw ConfigError("dataset runs train defenders");
    std::vector<MatchRecord> log;
    Train(c, TrainHooks{&log});
    rows = BuildSupervisedDataset(log, normalize);
    config["train"] = ToJson(c);
  } else if (source == "uniform") {
    const EnvConfig env = EnvConfigFromJson(r.Need<json>("env"));
    const int n = r.Get<int>("n", 10000);
    const std::uint64_t seed = r.Get<std::uint64_t>("seed", 1);
    r.Done();
    rows = UniformPartitionDataset(env.start_distribution(), n, seed, normalize);
    config["env"] = ToJson(env);
    config["n"] = n;
    config["seed"] = seed;
  } else {
    throw ConfigError("unknown dataset source '" + source + "' (records, train, uniform)");
  }
  std::string csv;
  if (!rows.empty()) {
    const int K = static_cast<int>(rows.front().observation.values.size()) / 2 - 1;
    for (int i = 0; i <= K; ++i) csv += "a" + std::to_string(i) + ",";
    for (int i = 0; i <= K; ++i) csv += "b" + std::to_string(i) + ",";
  }
  csv += "label,tie,match,turn\n";
  for (const LabeledMove& m : rows) {
    for (double v : m.observation.values) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      csv += buf;
    }
    csv += std::string(ToString(m.oracle_choice)) + "," + (m.tie ? "1" : "0") + "," +
           std::to_string(m.match) + "," + std::to_string(m.turn) + "\n";
  }
  CommandResult res;
  res.config = config;
  res.outputs.push_back({"dataset.csv", csv});
  res.summary = std::to_string(rows.size()) + " labeled moves";
  return res;
}

using Handler = CommandResult (*)(const json&, int);

const std::map<std::string, Handler>& Handlers() {
  static const std::map<std::string, Handler> handlers = {
      {"play", Play},         {"train", TrainCmd}, {"selfplay", SelfPlay},
      {"multiagent", Multiagent}, {"eval", Eval},  {"analyze", Analyze},
      {"enumerate", Enumerate},   {"dataset", Dataset}};
  return handlers;
}

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {"play", "train",   "selfplay",  "multiagent",
                                                 "eval", "analyze", "enumerate", "dataset"};
  return names;
}

CommandResult RunCommand(const std::string& subcommand, const json& config, int workers) {
  const auto it = Handlers().find(subcommand);
  if (it == Handlers().end()) throw ConfigError("unknown subcommand '" + subcommand + "'");
  if (workers < 1) throw ConfigError("workers must be positive");
  try {
    return it->second(config, workers);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
}

void WriteCommandResult(const std::string& subcommand, const CommandResult& result,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw RuntimeFailure("cannot create " + out_dir + ": " + ec.message());
  json outputs = json::array();
  for (const CommandOutput& o : result.outputs) {
    const fs::path path = fs::path(out_dir) / o.file;
    std::ofstream out(path, std::ios::binary);
    out << o.content;
    if (!out) throw RuntimeFailure("cannot write " + path.string());
    outputs.push_back({{"file", o.file}, {"sha1", GitBlobHash(o.content)}});
  }
  const json manifest = {{"subcommand", subcommand},
                         {"config", result.config},
                         {"config_hash", GitBlobHash(result.config.dump())},
                         {"outputs", outputs}};
  std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << "\n";
  if (!out) throw RuntimeFailure("cannot write the manifest in " + out_dir);
}

json ConfigFromFile(const std::string& subcommand, const std::string& path) {
  const json j = ParseJson(ReadFile(path), path);
  if (j.is_object() && j.contains("subcommand") && j.contains("config") &&
      j.contains("config_hash")) {
    if (j.at("subcommand") != subcommand) {
      throw ConfigError(path + " is a manifest for '" + j.at("subcommand").get<std::string>() +
                        "', not '" + subcommand + "'");
    }
    return j.at("config");
  }
  return j;
}

}  // namespace ess
