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

#include "ess/strategies.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <charconv>
#include <numeric>

#include "ess/errors.hpp"

namespace ess {
namespace {

using Wide = __int128;

void RequireLive(const GameState& state, const char* who) {
  if (IsTerminal(state)) {
    throw StateError(std::string(who) + " needs a non-terminal state");
  }
}

// Pieces strictly above `level`, and their potential.
struct Above {
  Count pieces = 0;
  Units units = 0;
};

std::vector<Above> PiecesAbove(const GameState& state) {
  const int K = state.K();
  std::vector<Above> above(K + 1);
  for (int l = K - 1; l >= 0; --l) {
    above[l].pieces = above[l + 1].pieces + state[l + 1];
    above[l].units = above[l + 1].units + (state[l + 1] << (l + 1));
  }
  return above;
}

// Candidate counts j in [0, n] around the real solution hi + j*w = target.
std::array<Count, 2> Bracket(Wide target_minus_hi, Wide w, Count n) {
  Count lo = 0;
  if (target_minus_hi > 0) {
    lo = static_cast<Count>(std::min<Wide>(target_minus_hi / w, n));
  }
  return {lo, std::min<Count>(lo + 1, n)};
}

}  // namespace

Fraction ParseFraction(std::string_view text) {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_point = false;
  bool any_digit = false;
  for (char c : text) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      if (num > (std::int64_t{1} << 50) || den > (std::int64_t{1} << 50)) {
        throw ConfigError("fraction has too many digits: " + std::string(text));
      }
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
      any_digit = true;
    } else {
      throw ConfigError("not a decimal fraction: " + std::string(text));
    }
  }
  if (!any_digit) throw ConfigError("not a decimal fraction: " + std::string(text));
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::string ToString(const Fraction& f) {
  return std::to_string(f.num) + "/" + std::to_string(f.den);
}

AttackerKind AttackerKind::Parse(std::string_view name) {
  AttackerKind k;
  if (name == "prefix" || name == "optimal") {
    k.kind = Kind::kPrefix;
  } else if (name == "disjoint" || name == "disjoint-support") {
    k.kind = Kind::kDisjointSupport;
  } else if (name == "mixed") {
    k.kind = Kind::kMixed;
  } else if (name.starts_with("mixed:")) {
    k.kind = Kind::kMixed;
    const auto p = name.substr(6);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), value);
    if (ec != std::errc() || ptr != p.data() + p.size()) {
      throw ConfigError("bad mixing probability in '" + std::string(name) + "'");
    }
    k.mix_p_optimal = value;
  } else {
    throw ConfigError("unknown attacker '" + std::string(name) + "'");
  }
  k.Validate();
  return k;
}

std::string AttackerKind::Name() const {
  switch (kind) {
    case Kind::kPrefix:
      return "prefix";
    case Kind::kDisjointSupport:
      return "disjoint";
    case Kind::kMixed: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "mixed:%g", mix_p_optimal);
      return buf;
    }
  }
  return "?";
}

void AttackerKind::Validate() const {
  if (!(mix_p_optimal >= 0.0 && mix_p_optimal <= 1.0)) {
    throw ConfigError("mixing probability must lie in [0, 1]");
  }
  if (fraction_menu.empty()) throw ConfigError("fraction menu is empty");
  for (const Fraction& f : fraction_menu) {
    if (f.den <= 0 || f.num <= 0 || 2 * f.num >= f.den) {
      throw ConfigError("fraction menu entries must lie in (0, 0.5), got " +
                        ToString(f));
    }
  }
}

Side OptimalDefenderChoice(const Partition& partition) {
  return Potential(partition, Side::kB) > Potential(partition, Side::kA)
             ? Side::kB
             : Side::kA;
}

Side RandomDefenderChoice(Rng& rng) {
  return Bernoulli(rng, 0.5) ? Side::kA : Side::kB;
}

Partition PrefixCut(const GameState& state, Count num_in_a) {
  const int K = state.K();
  if (num_in_a < 0 || num_in_a > state.num_pieces()) {
    throw ValidationError("prefix cut out of range");
  }
  Partition p{std::vector<Count>(K + 1, 0), state.counts()};
  Count left = num_in_a;
  for (int l = K; l >= 0 && left > 0; --l) {
    const Count take = std::min(left, state[l]);
    p.a[l] = take;
    p.b[l] -= take;
    left -= take;
  }
  return p;
}

Partition RandomSplit(const GameState& state, Rng& rng) {
  const int K = state.K();
  Partition p{std::vector<Count>(K + 1, 0), state.counts()};
  for (int l = 0; l <= K; ++l) {
    p.a[l] = static_cast<Count>(UniformIndex(rng, static_cast<std::uint64_t>(state[l]) + 1));
    p.b[l] -= p.a[l];
  }
  return p;
}

Partition PrefixAttackerPartition(const GameState& state) {
  RequireLive(state, "prefix attacker");
  const Units total = Potential(state);
  const auto above = PiecesAbove(state);
  Units best_min = -1;
  Count best_cut = 0;
  auto consider = [&](Units a_units, Count cut) {
    const Units m = std::min(a_units, total - a_units);
    if (m > best_min || (m == best_min && cut > best_cut)) {
      best_min = m;
      best_cut = cut;
    }
  };
  consider(0, 0);
  for (int l = state.K(); l >= 0; --l) {
    if (state[l] == 0) continue;
    const Units w = Units{1} << l;
    // Balance point: above + j*w = total/2, i.e. 2*(above + j*w) = total.
    const Wide gap = static_cast<Wide>(total) - 2 * static_cast<Wide>(above[l].units);
    for (Count j : Bracket(gap, 2 * w, state[l])) {
      consider(above[l].units + j * w, above[l].pieces + j);
    }
    consider(above[l].units + state[l] * w, above[l].pieces + state[l]);
  }
  return PrefixCut(state, best_cut);
}

Partition DisjointSupportPartition(const GameState& state, Fraction share) {
  RequireLive(state, "disjoint-support attacker");
  const Units total = Potential(state);
  const auto above = PiecesAbove(state);
  // Distance of B's potential from share*total, scaled by den.
  auto distance = [&](Units b_units) {
    const Wide d = static_cast<Wide>(b_units) * share.den -
                   static_cast<Wide>(total) * share.num;
    return d < 0 ? -d : d;
  };
  Wide best = -1;
  Count best_cut = 0;
  auto consider = [&](Units a_units, Count cut) {
    const Wide d = distance(total - a_units);
    if (best < 0 || d < best || (d == best && cut > best_cut)) {
      best = d;
      best_cut = cut;
    }
  };
  consider(0, 0);
  for (int l = state.K(); l >= 0; --l) {
    if (state[l] == 0) continue;
    const Units w = Units{1} << l;
    // B = total - above - j*w should be share*total:
    // den*(total - above) - num*total = j*w*den.
    const Wide gap = (static_cast<Wide>(total) - above[l].units) * share.den -
                     static_cast<Wide>(total) * share.num;
    for (Count j : Bracket(gap, static_cast<Wide>(w) * share.den, state[l])) {
      consider(above[l].units + j * w, above[l].pieces + j);
    }
  }
  return PrefixCut(state, best_cut);
}

Partition DisjointSupportPartition(const GameState& state, Rng& rng,
                                   const std::vector<Fraction>& menu) {
  RequireLive(state, "disjoint-support attacker");
  if (menu.empty()) throw ConfigError("fraction menu is empty");
  const Fraction share = menu[UniformIndex(rng, menu.size())];
  return DisjointSupportPartition(state, share);
}

Partition MixedAttackerPartition(const GameState& state, Rng& rng,
                                 double p_optimal,
                                 const std::vector<Fraction>& menu) {
  RequireLive(state, "mixed attacker");
  if (Bernoulli(rng, p_optimal)) return PrefixAttackerPartition(state);
  return DisjointSupportPartition(state, rng, menu);
}

AttackerPolicy MakeAttackerPolicy(const AttackerKind& kind) {
  kind.Validate();
  switch (kind.kind) {
    case AttackerKind::Kind::kPrefix:
      return [](const GameState& s, Rng&) { return PrefixAttackerPartition(s); };
    case AttackerKind::Kind::kDisjointSupport:
      return [menu = kind.fraction_menu](const GameState& s, Rng& rng) {
        return DisjointSupportPartition(s, rng, menu);
      };
    case AttackerKind::Kind::kMixed:
      return [p = kind.mix_p_optimal, menu = kind.fraction_menu](
                 const GameState& s, Rng& rng) {
        return MixedAttackerPartition(s, rng, p, menu);
      };
  }
  throw ConfigError("unknown attacker kind");
}

DefenderPolicy OptimalDefenderPolicy() {
  return [](const Partition& p, Rng&) { return OptimalDefenderChoice(p); };
}

DefenderPolicy RandomDefenderPolicy() {
  return [](const Partition&, Rng& rng) { return RandomDefenderChoice(rng); };
}

}  // namespace ess
