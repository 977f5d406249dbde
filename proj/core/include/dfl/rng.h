// Copyright 2026 The DFL-SFGE Authors
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

// Seed derivation. Every random stream in the library is a std::mt19937_64
// seeded from a master seed and a path of integers (stream tag, epoch,
// batch, example, ...), so results do not depend on evaluation order.

#ifndef DFL_RNG_H_
#define DFL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dfl {

using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t p : path) h = SplitMix64(h ^ SplitMix64(p + 0x51ULL));
  return h;
}

inline Rng MakeRng(std::uint64_t seed,
                   std::initializer_list<std::uint64_t> path = {}) {
  return Rng(DeriveSeed(seed, path));
}

// Stream tags for DeriveSeed paths.
enum StreamTag : std::uint64_t {
  kStreamDataset = 1,
  kStreamSplit = 2,
  kStreamInit = 3,
  kStreamShuffle = 4,
  kStreamSample = 5,
  kStreamScenario = 6,
};

}  // namespace dfl

#endif  // DFL_RNG_H_
