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

#ifndef ESS_RNG_HPP_
#define ESS_RNG_HPP_

#include <cstdint>
#include <random>

namespace ess {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child streams.
constexpr std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the index-th child of a master seed (match, worker, seed lane...).
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  return MixSeed(MixSeed(master) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

// Uniform double in [0, 1) built from 53 random bits. Unlike
// std::uniform_real_distribution this is identical across standard libraries.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling keeps it exact.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} / n) * n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

inline bool Bernoulli(Rng& rng, double p) { return UniformUnit(rng) < p; }

// Box-Muller standard normal.
double StandardNormal(Rng& rng);

}  // namespace ess

#endif  // ESS_RNG_HPP_
