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

#include "ess/start_states.hpp"

#include <cmath>

#include "ess/errors.hpp"

namespace ess {

Units UnitsFromPotential(double potential, int K) {
  CheckLevelCount(K);
  const double scaled = std::ldexp(potential, K);
  const double rounded = std::round(scaled);
  if (!(std::fabs(scaled - rounded) <= 1e-9 * std::max(1.0, std::fabs(scaled)))) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "potential %g is %.4f units at K=%d; pass a whole number of "
                  "units instead",
                  potential, scaled, K);
    throw ConfigError(buf);
  }
  if (rounded < 0) throw ConfigError("potential must be non-negative");
  if (rounded > static_cast<double>(kMaxUnits)) {
    throw ArithmeticBoundError("potential out of range");
  }
  return static_cast<Units>(rounded);
}

StartDistribution::Kind StartDistribution::ParseKind(std::string_view name) {
  if (name == "level0") return Kind::kLevel0;
  if (name == "spread" || name == "random-spread") return Kind::kRandomSpread;
  if (name == "single" || name == "single-level") return Kind::kSingleLevel;
  throw ConfigError("unknown start distribution '" + std::string(name) + "'");
}

std::string StartDistribution::KindName(Kind kind) {
  switch (kind) {
    case Kind::kLevel0:
      return "level0";
    case Kind::kRandomSpread:
      return "spread";
    case Kind::kSingleLevel:
      return "single";
  }
  return "?";
}

void StartDistribution::Validate() const {
  CheckLevelCount(K);
  if (target_units < 1) {
    throw ConfigError("start potential must be at least one unit");
  }
  if (target_units > kMaxUnits) throw ArithmeticBoundError("start potential too large");
}

namespace {

// Highest level below K whose piece fits into `remaining` units.
int TopFittingLevel(Units remaining, int K) {
  int l = 0;
  while (l + 1 < K && (Units{1} << (l + 1)) <= remaining) ++l;
  return l;
}

}  // namespace

GameState SampleStartState(const StartDistribution& dist, Rng& rng) {
  dist.Validate();
  const int K = dist.K;
  std::vector<Count> counts(K + 1, 0);
  Units remaining = dist.target_units;
  switch (dist.kind) {
    case StartDistribution::Kind::kLevel0:
      counts[0] = remaining;
      break;
    case StartDistribution::Kind::kRandomSpread:
      // Levels are drawn among those that still fit, so the walk always lands
      // on the target; level 0 fits whenever anything is left.
      while (remaining > 0) {
        const int top = TopFittingLevel(remaining, K);
        const int l = static_cast<int>(UniformIndex(rng, top + 1));
        ++counts[l];
        remaining -= Units{1} << l;
      }
      break;
    case StartDistribution::Kind::kSingleLevel: {
      const int top = TopFittingLevel(remaining, K);
      const int l = static_cast<int>(UniformIndex(rng, top + 1));
      counts[l] = remaining >> l;
      counts[0] += remaining - (counts[l] << l);
      break;
    }
  }
  return GameState(K, std::move(counts));
}

std::uint64_t ForEachState(int K, Units target, bool forbid_top,
                           const std::function<void(const GameState&)>& visit) {
  CheckLevelCount(K);
  if (K > kMaxEnumerationK) {
    throw ConfigError("exhaustive enumeration is limited to K <= " +
                      std::to_string(kMaxEnumerationK) +
                      "; use the count for larger K");
  }
  if (target < 0) throw ValidationError("target must be non-negative");
  if (target > (Units{1} << 20)) {
    throw ArithmeticBoundError("enumeration target above 2^20 units");
  }
  std::vector<Count> counts(K + 1, 0);
  std::uint64_t visited = 0;
  // Fill levels from the top; level 0 absorbs whatever is left.
  std::function<void(int, Units)> rec = [&](int level, Units remaining) {
    if (level == 0) {
      counts[0] = remaining;
      ++visited;
      visit(GameState(K, counts));
      return;
    }
    const Count max_here =
        (forbid_top && level == K) ? 0 : remaining >> level;
    for (Count n = 0; n <= max_here; ++n) {
      counts[level] = n;
      rec(level - 1, remaining - (n << level));
    }
    counts[level] = 0;
  };
  rec(K, target);
  return visited;
}

std::vector<GameState> EnumerateStates(int K, Units target, bool forbid_top) {
  std::vector<GameState> out;
  ForEachState(K, target, forbid_top,
               [&](const GameState& s) { out.push_back(s); });
  return out;
}

BigCount CountStates(int K, Units target) {
  CheckLevelCount(K);
  if (K > kMaxCountK) {
    throw ConfigError("counting is limited to K <= " + std::to_string(kMaxCountK));
  }
  if (target < 0) throw ValidationError("target must be non-negative");
  if (target > kMaxCountUnits) {
    throw ArithmeticBoundError("count target above 2^21 units");
  }
  // ways[t] = number of ways to write t with pieces of levels processed so far.
  std::vector<BigCount> ways(static_cast<std::size_t>(target) + 1, 0);
  ways[0] = 1;
  for (int l = 0; l <= K; ++l) {
    const Units w = Units{1} << l;
    for (Units t = w; t <= target; ++t) ways[t] += ways[t - w];
  }
  return ways[target];
}

}  // namespace ess
