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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any failed. Pass criterion numbers to run a subset; with none,
// everything runs.
//
// The value-learner check stores its mean win rate under ESS_ACCEPTANCE_DIR
// (default: the working directory) so the self-play check, which compares
// against it, does not have to retrain when run on its own afterwards.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ess/agent.hpp"
#include "ess/analysis.hpp"
#include "ess/commands.hpp"
#include "ess/errors.hpp"
#include "ess/rl.hpp"
#include "ess/self_play.hpp"
#include "ess/serialization.hpp"
#include "ess/start_states.hpp"
#include "ess/strategies.hpp"
#include "generators.hpp"
#include "gradcheck.hpp"

namespace ess {
namespace {

namespace fs = std::filesystem;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

fs::path StateDir() {
  const char* dir = std::getenv("ESS_ACCEPTANCE_DIR");
  return dir ? fs::path(dir) : fs::current_path();
}

// Start with a uniformly drawn unit count in [lo, hi] from a random start kind.
GameState SampleStart(Rng& rng, int K, Units lo, Units hi) {
  const Units units = lo + static_cast<Units>(UniformIndex(rng, static_cast<std::uint64_t>(hi - lo + 1)));
  return testing::RandomStateWithUnits(rng, K, units);
}

// ---------------------------------------------------------------------------

Verdict OptimalDefenderBelowThreshold() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, AttackerPolicy>> attackers = {
      {"prefix", MakeAttackerPolicy(AttackerKind::Parse("prefix"))},
      {"disjoint", MakeAttackerPolicy(AttackerKind::Parse("disjoint"))},
      {"mixed", MakeAttackerPolicy(AttackerKind::Parse("mixed:0.8"))},
      {"random", [](const GameState& s, Rng& rng) { return RandomSplit(s, rng); }}};
  const DefenderPolicy defender = OptimalDefenderPolicy();
  std::int64_t games = 0, wins = 0;
  for (int K = 3; K <= 12; ++K) {
    Rng rng(DeriveSeed(101, K));
    for (int i = 0; i < 500; ++i) {
      const GameState s = SampleStart(rng, K, 1, UnitOne(K) - 1);
      for (std::size_t a = 0; a < attackers.size(); ++a) {
        const MatchRecord r = PlayMatch(attackers[a].second, defender, s, rng());
        ++games;
        wins += !r.fault && r.outcome.winner == Player::kDefender;
      }
    }
  }
  const double secs = Seconds(t0);
  return {wins == games && secs < 30.0,
          Format("%lld/%lld defender wins over K=3..12, %.1f s", static_cast<long long>(wins),
                 static_cast<long long>(games), secs)};
}

Verdict PrefixAttackerAboveThreshold() {
  const auto t0 = std::chrono::steady_clock::now();
  const AttackerPolicy prefix = MakeAttackerPolicy(AttackerKind::Parse("prefix"));
  const DefenderPolicy defender = OptimalDefenderPolicy();
  std::int64_t games = 0, wins = 0, partitions = 0, unbalanced = 0;
  for (int K = 3; K <= 12; ++K) {
    Rng rng(DeriveSeed(202, K));
    const Units half = UnitHalf(K);
    for (int i = 0; i < 500; ++i) {
      const GameState s = SampleStart(rng, K, UnitOne(K), 2 * UnitOne(K));
      if (IsTerminal(s)) continue;  // already won; nothing to split
      const MatchRecord r = PlayMatch(prefix, defender, s, rng());
      ++games;
      wins += !r.fault && r.outcome.winner == Player::kAttacker;
      for (const Step& step : r.steps) {
        ++partitions;
        unbalanced += std::min(Potential(step.partition, Side::kA),
                               Potential(step.partition, Side::kB)) < half;
      }
    }
  }
  const double secs = Seconds(t0);
  return {wins == games && unbalanced == 0 && secs < 30.0,
          Format("%lld/%lld attacker wins, %lld/%lld partitions with a side below 1/2, %.1f s",
                 static_cast<long long>(wins), static_cast<long long>(games),
                 static_cast<long long>(unbalanced), static_cast<long long>(partitions), secs)};
}

Verdict BinarySearchMatchesPrefix() {
  const Comparator exact = ExactComparator();
  Rng rng(303);
  std::int64_t checked = 0, mismatches = 0, over_budget = 0;
  int worst_slack = 1 << 30;
  auto check = [&](const GameState& s) {
    const BinarySearchResult r = BinarySearchPartition(s, exact, rng);
    const int bound =
        static_cast<int>(std::ceil(std::log2(static_cast<double>(s.num_pieces()) + 1)));
    ++checked;
    mismatches += !(r.partition == PrefixAttackerPartition(s));
    over_budget += r.probes > bound;
    worst_slack = std::min(worst_slack, bound - r.probes);
  };
  std::int64_t enumerated = 0;
  for (int K = 1; K <= 6; ++K) {
    ForEachState(K, UnitOne(K), true, [&](const GameState& s) {
      ++enumerated;
      check(s);
    });
  }
  for (int i = 0; i < 10000; ++i) {
    const int K = 1 + static_cast<int>(UniformIndex(rng, 12));
    check(testing::RandomLiveState(rng, K, 1 + static_cast<Count>(UniformIndex(rng, 40))));
  }
  return {mismatches == 0 && over_budget == 0,
          Format("%lld states (%lld enumerated), %lld mismatches, %lld over the probe bound",
                 static_cast<long long>(checked), static_cast<long long>(enumerated),
                 static_cast<long long>(mismatches), static_cast<long long>(over_budget))};
}

Verdict EnumerationMatchesCounting() {
  std::int64_t targets = 0, disagreements = 0;
  std::uint64_t states = 0;
  for (int K = 1; K <= 8; ++K) {
    for (Units t = 0; t <= UnitOne(K); ++t) {
      const std::uint64_t n = ForEachState(K, t, false, [](const GameState&) {});
      ++targets;
      states += n;
      disagreements += BigCount(n) != CountStates(K, t);
    }
  }
  const bool k2 = CountStates(2, UnitOne(2)) == 4 && EnumerateStates(2, UnitOne(2), false).size() == 4;
  const bool k3 = CountStates(3, UnitOne(3)) == 10 && EnumerateStates(3, UnitOne(3), false).size() == 10;
  return {disagreements == 0 && k2 && k3,
          Format("%lld (K, target) pairs, %llu states, %lld disagreements; K=2 count %s, K=3 count %s",
                 static_cast<long long>(targets), static_cast<unsigned long long>(states),
                 static_cast<long long>(disagreements),
                 CountStates(2, UnitOne(2)).str().c_str(), CountStates(3, UnitOne(3)).str().c_str())};
}

// Shared setting for the two learning checks.
TrainConfig LearningConfig(std::uint64_t seed) {
  TrainConfig c = DefaultTrainConfig(Algorithm::kValueLearner);
  c.env.K = 5;
  c.env.start = StartDistribution::Kind::kRandomSpread;
  c.env.potential_units = 30;
  c.env.opponent = "mixed:0.8";
  c.total_steps = 200000;
  c.seed = seed;
  return c;
}

constexpr int kLearningEvalGames = 1000;
const std::vector<std::uint64_t> kLearningSeeds = {1, 2, 3};

std::uint64_t LearningEvalSeed(std::uint64_t seed) { return DeriveSeed(seed, 100); }

fs::path ValueMeanFile() { return StateDir() / "value_learner_mean.txt"; }

Verdict ValueLearnerLearns() {
  const std::clock_t c0 = std::clock();
  std::vector<double> rates;
  std::string per_seed;
  for (std::uint64_t seed : kLearningSeeds) {
    const TrainConfig c = LearningConfig(seed);
    const TrainedAgent a = TrainValueLearner(c);
    rates.push_back(EvaluateAgent(a, c.env, kLearningEvalGames, LearningEvalSeed(seed)).win_rate);
    per_seed += Format("%s%.3f", per_seed.empty() ? "" : " ", rates.back());
  }
  const double cpu = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;
  double mean = 0, low = 1;
  for (double r : rates) {
    mean += r / rates.size();
    low = std::min(low, r);
  }
  std::ofstream(ValueMeanFile()) << Format("%.17g %s\n", mean, ConfigHash(LearningConfig(1)).c_str());
  return {mean >= 0.9 && low >= 0.8 && cpu < 600.0,
          Format("mean win rate %.3f (seeds: %s), %.0f s CPU for 3 x 2e5 steps", mean,
                 per_seed.c_str(), cpu)};
}

// Mean from the value-learner check, retraining if it has not run yet.
double ValueLearnerMean() {
  std::ifstream in(ValueMeanFile());
  double mean;
  std::string hash;
  if (in >> mean >> hash && hash == ConfigHash(LearningConfig(1))) return mean;
  std::printf("  (no stored value-learner result; running that check first)\n");
  ValueLearnerLearns();
  std::ifstream again(ValueMeanFile());
  again >> mean;
  return mean;
}

Verdict SelfPlayMatchesValueLearner() {
  const double baseline = ValueLearnerMean();
  std::vector<double> rates, accs;
  std::string per_seed;
  for (std::uint64_t seed : kLearningSeeds) {
    TrainConfig c = LearningConfig(seed);
    c.role = Role::kComparator;
    const TrainedAgent a = TrainSelfPlay(c);
    rates.push_back(EvaluateAgent(a, c.env, kLearningEvalGames, LearningEvalSeed(seed)).win_rate);
    accs.push_back(ComparatorAccuracy(a, c.env.start_distribution(), 10000, DeriveSeed(seed, 11)));
    per_seed += Format("%s%.3f/%.4f", per_seed.empty() ? "" : " ", rates.back(), accs.back());
  }
  double mean = 0, acc = 0, low_acc = 1;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    mean += rates[i] / rates.size();
    acc += accs[i] / accs.size();
    low_acc = std::min(low_acc, accs[i]);
  }
  return {mean >= baseline - 0.02 && low_acc >= 0.95,
          Format("mean win rate %.3f vs value learner %.3f, comparator accuracy mean %.4f min "
                 "%.4f (win/acc per seed: %s)",
                 mean, baseline, acc, low_acc, per_seed.c_str())};
}

Verdict MistakeTaxonomySound() {
  Rng rng(707);
  std::int64_t broken_chain = 0, oracle_terminal = 0, fatal = 0, terminal = 0;
  for (int i = 0; i < 100000; ++i) {
    const int K = 1 + static_cast<int>(UniformIndex(rng, 10));
    const GameState s = testing::RandomLiveState(rng, K, 1 + static_cast<Count>(UniformIndex(rng, 12)));
    const Partition p = RandomSplit(s, rng);
    for (Side side : {Side::kA, Side::kB}) {
      const MoveGrade g = GradeMove(p, side);
      broken_chain += (g.fatal_mistake && !g.terminal_mistake) || (g.terminal_mistake && g.correct);
      fatal += g.fatal_mistake;
      terminal += g.terminal_mistake;
    }
    oracle_terminal += GradeMove(p, OptimalDefenderChoice(p)).terminal_mistake;
  }
  // A coin-flip defender that only ever avoids terminal mistakes.
  const DefenderPolicy careful = [](const Partition& p, Rng& r) {
    const Side coin = Bernoulli(r, 0.5) ? Side::kA : Side::kB;
    return GradeMove(p, coin).terminal_mistake ? (coin == Side::kA ? Side::kB : Side::kA) : coin;
  };
  const std::vector<AttackerPolicy> attackers = {
      MakeAttackerPolicy(AttackerKind::Parse("prefix")),
      MakeAttackerPolicy(AttackerKind::Parse("mixed:0.8")),
      [](const GameState& s, Rng& r) { return RandomSplit(s, r); }};
  std::int64_t matches = 0, losses = 0, replay_mismatch = 0, careless = 0;
  for (int i = 0; i < 3000; ++i) {
    const int K = 2 + static_cast<int>(UniformIndex(rng, 9));
    const GameState s = SampleStart(rng, K, 1, UnitOne(K) - 1);
    const MatchRecord r = PlayMatch(attackers[i % attackers.size()], careful, s, rng());
    ++matches;
    std::stringstream buf;
    WriteRecords({r}, buf);
    const MatchRecord back = ReadRecords(buf).front();
    replay_mismatch += !(Replay(back) == r.outcome);
    for (const Step& step : back.steps) careless += GradeMove(step.partition, step.destroyed).terminal_mistake;
    losses += r.outcome.winner != Player::kDefender;
  }
  return {broken_chain == 0 && oracle_terminal == 0 && losses == 0 && replay_mismatch == 0 &&
              careless == 0 && fatal > 0,
          Format("1e5 partitions: %lld terminal, %lld fatal, %lld chain violations, %lld oracle "
                 "terminal mistakes; %lld replayed careful-defender matches, %lld losses, %lld "
                 "replay mismatches",
                 static_cast<long long>(terminal), static_cast<long long>(fatal),
                 static_cast<long long>(broken_chain), static_cast<long long>(oracle_terminal),
                 static_cast<long long>(matches), static_cast<long long>(losses),
                 static_cast<long long>(replay_mismatch))};
}

Verdict GradientsMatch() {
  Rng rng(808);
  double worst_linear = 0, worst_mlp = 0;
  for (int draw = 0; draw < 20; ++draw) {
    const int in = 2 + static_cast<int>(UniformIndex(rng, 20));
    const int out = 2 + static_cast<int>(UniformIndex(rng, 10));
    const int batch = 1 + static_cast<int>(UniformIndex(rng, 8));
    const nn::Matrix x = testing::RandomMatrix(in, batch, rng, 1.0);
    const nn::Matrix t = testing::RandomMatrix(out, batch, rng, 1.0);
    const nn::Network linear(nn::Arch::kLinear, in, out, rng);
    worst_linear = std::max(worst_linear,
                            testing::CheckGradients(linear, x, t, 1 << 20, rng).relative_error);
    const nn::Network mlp(nn::Arch::kMlp2x300, in, out, rng);
    worst_mlp = std::max(worst_mlp, testing::CheckGradients(mlp, x, t, 200, rng).relative_error);
  }
  return {worst_linear <= 1e-4 && worst_mlp <= 1e-4,
          Format("worst relative error over 20 draws: linear %.2e, mlp2x300 %.2e", worst_linear,
                 worst_mlp)};
}

Verdict SupervisedComparisonRuns() {
  std::string report;
  bool ok = true;
  for (int K : {5, 10}) {
    TrainConfig rl = DefaultTrainConfig(Algorithm::kValueLearner);
    rl.env.K = K;
    rl.env.potential_units = std::llround(0.95 * static_cast<double>(UnitOne(K)));
    rl.env.opponent = "mixed:0.8";
    rl.total_steps = 20000;
    rl.eval_interval = 20000;
    rl.eval_games = 50;
    rl.seed = 1;
    SupervisedConfig sup;
    sup.seed = 1;
    const ComparisonRun run = RunRlVsSupervised(rl, sup, 200);
    std::map<std::string, MoveQuality> by;
    for (const MoveQuality& q : run.rows) by[q.agent] = q;
    ok = ok && by.count("rl") && by.count("supervised");
    for (const auto& [name, q] : by) {
      ok = ok && q.moves > 0 && std::isfinite(q.accuracy) && std::isfinite(q.win_rate) &&
           std::isfinite(q.terminal_rate) && std::isfinite(q.fatal_rate);
      std::printf("  K=%d %-10s accuracy %.4f win %.4f terminal %.4f fatal %.4f\n", K,
                  name.c_str(), q.accuracy, q.win_rate, q.terminal_rate, q.fatal_rate);
    }
    const MoveQuality& r = by["rl"];
    const MoveQuality& s = by["supervised"];
    report += Format("%sK=%d: supervised accuracy %s, rl reward %s, rl fatal %s", report.empty() ? "" : "; ",
                     K, s.accuracy > r.accuracy ? "higher" : "not higher",
                     r.win_rate > s.win_rate ? "higher" : "not higher",
                     r.fatal_rate < s.fatal_rate ? "lower" : "not lower");
  }
  return {ok, "all four metrics for both agents (reported, not asserted): " + report};
}

// Runs `sub`, reruns it from its manifest and compares every written byte.
bool RerunIsIdentical(const std::string& sub, const nlohmann::json& config, const fs::path& dir,
                      std::string* why) {
  WriteCommandResult(sub, RunCommand(sub, config), (dir / "first").string());
  const nlohmann::json again = ConfigFromFile(sub, (dir / "first" / "manifest.json").string());
  WriteCommandResult(sub, RunCommand(sub, again), (dir / "second").string());
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "first")) {
    const fs::path other = dir / "second" / entry.path().filename();
    std::ifstream a(entry.path(), std::ios::binary), b(other, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    ++files;
    if (!b || sa.str() != sb.str()) {
      *why = sub + ": " + entry.path().filename().string() + " differs";
      return false;
    }
  }
  return files > 1;
}

Verdict RerunsAreByteIdentical() {
  const fs::path root = StateDir() / "rerun";
  fs::remove_all(root);
  const nlohmann::json env = {
      {"K", 4}, {"start", "spread"}, {"potential_units", 14}, {"opponent", "mixed:0.8"}};
  std::string why;
  std::vector<std::string> ok;
  const nlohmann::json train = {{"algorithm", "value"}, {"total_steps", 3000},
                                {"eval_interval", 1000}, {"eval_games", 50},
                                {"seed", 5}, {"env", env}};
  if (RerunIsIdentical("train", train, root / "train", &why)) ok.push_back("train");
  const nlohmann::json eval = {{"agent", (root / "train" / "first" / "agent.json").string()},
                               {"env", env}, {"games", 300}, {"seed", 9}};
  if (why.empty() && RerunIsIdentical("eval", eval, root / "eval", &why)) ok.push_back("eval");
  const nlohmann::json experiment = {
      {"mode", "experiment"},
      {"spec",
       {{"name", "rerun"},
        {"seeds", {1, 2}},
        {"eval_games", 100},
        {"arms",
         {{{"name", "oracle"}, {"kind", "fixed"}, {"defender", "optimal"}},
          {{"name", "search"},
           {"agent", {{"algorithm", "random-search"}, {"total_steps", 2000}, {"env", env}}}}}},
        {"test_envs", {{{"name", "mixed"}, {"env", env}}}}}}};
  if (why.empty() && RerunIsIdentical("analyze", experiment, root / "experiment", &why)) {
    ok.push_back("experiment");
  }
  std::string list;
  for (const auto& s : ok) list += (list.empty() ? "" : ", ") + s;
  return {ok.size() == 3,
          "identical reruns from manifest: " + (list.empty() ? "none" : list) +
              (why.empty() ? "" : " (" + why + ")")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> all = {
      {1, "optimal defender wins every game below the threshold", OptimalDefenderBelowThreshold},
      {2, "prefix attacker wins every game at or above the threshold", PrefixAttackerAboveThreshold},
      {3, "binary search with an exact comparator equals the prefix attacker", BinarySearchMatchesPrefix},
      {4, "state enumeration agrees with counting", EnumerationMatchesCounting},
      {5, "value learner defends at K=5", ValueLearnerLearns},
      {6, "self-play comparator matches the value learner", SelfPlayMatchesValueLearner},
      {7, "mistake taxonomy is consistent", MistakeTaxonomySound},
      {8, "analytic gradients match finite differences", GradientsMatch},
      {9, "rl vs supervised comparison runs end to end", SupervisedComparisonRuns},
      {10, "reruns from a manifest are byte-identical", RerunsAreByteIdentical},
  };
  return all;
}

}  // namespace
}  // namespace ess

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : ess::Criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    ess::Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2d  %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
