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

#include "ess/encoding.hpp"

#include <cmath>

#include "ess/errors.hpp"

namespace ess {
namespace {

void Append(std::vector<double>& out, const std::vector<Count>& counts,
            bool normalize) {
  const int K = static_cast<int>(counts.size()) - 1;
  for (int i = 0; i <= K; ++i) {
    const double c = static_cast<double>(counts[i]);
    out.push_back(normalize ? std::ldexp(c, i - K) : c);
  }
}

}  // namespace

ObservationVec EncodeDefenderObs(const Partition& partition, bool normalize) {
  ObservationVec obs{ObsLayout::kDefenderConcat, {}};
  obs.values.reserve(partition.a.size() + partition.b.size());
  Append(obs.values, partition.a, normalize);
  Append(obs.values, partition.b, normalize);
  return obs;
}

ObservationVec EncodeAttackerObs(const GameState& state, bool normalize) {
  ObservationVec obs{ObsLayout::kAttackerState, {}};
  Append(obs.values, state.counts(), normalize);
  return obs;
}

Partition DecodeDefenderObs(const ObservationVec& obs) {
  if (obs.layout != ObsLayout::kDefenderConcat || obs.values.size() % 2 != 0 ||
      obs.values.empty()) {
    throw ValidationError("not a defender observation");
  }
  const std::size_t half = obs.values.size() / 2;
  Partition p;
  for (std::size_t i = 0; i < obs.values.size(); ++i) {
    const double v = obs.values[i];
    if (v < 0 || v != std::floor(v)) {
      throw ValidationError("observation entries must be whole counts");
    }
    (i < half ? p.a : p.b).push_back(static_cast<Count>(v));
  }
  return p;
}

nn::Vector ToVector(const ObservationVec& obs) {
  return Eigen::Map<const nn::Vector>(obs.values.data(),
                                      static_cast<Eigen::Index>(obs.values.size()));
}

Partition AttackerActionToPartition(const GameState& state, int level) {
  const int K = state.K();
  if (level < 0 || level > K) {
    throw ValidationError("attacker level " + std::to_string(level) +
                          " outside [0, " + std::to_string(K) + "]");
  }
  if (IsTerminal(state)) throw StateError("attacker move on a terminal state");
  Partition p{std::vector<Count>(K + 1, 0), std::vector<Count>(K + 1, 0)};
  Units above = 0;
  Units below = 0;
  for (int i = 0; i <= K; ++i) {
    if (i > level) {
      p.a[i] = state[i];
      above += state[i] << i;
    } else if (i < level) {
      p.b[i] = state[i];
      below += state[i] << i;
    }
  }
  const Count n = state[level];
  const Units w = Units{1} << level;
  // |above + j*w - below - (n - j)*w| is minimal near
  // j = (below - above + n*w) / (2w).
  const __int128 num =
      static_cast<__int128>(below) - above + static_cast<__int128>(n) * w;
  Count lo = num <= 0 ? 0 : static_cast<Count>(std::min<__int128>(num / (2 * w), n));
  auto gap = [&](Count j) {
    const __int128 d = static_cast<__int128>(above) + j * w - below - (n - j) * w;
    return d < 0 ? -d : d;
  };
  Count best = lo;
  if (lo + 1 <= n && gap(lo + 1) < gap(lo)) best = lo + 1;
  p.a[level] = best;
  p.b[level] = n - best;
  return p;
}

}  // namespace ess
