// Copyright 2026 The Anyplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANYPLAY_RNG_H_
#define ANYPLAY_RNG_H_

#include <cstdint>
#include <random>

namespace anyplay {

// 64-bit avalanche finalizer used for all derived seeds (pairing seeds,
// restart attempts, intent substreams). Constants are part of the on-disk
// reproducibility contract: matrices regenerated from the same base seed
// must be bit-identical.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Seed for cross-play cell (i, j) from a matrix base seed.
constexpr std::uint64_t PairingSeed(std::uint64_t base, std::uint64_t i,
                                    std::uint64_t j) {
  return Mix64(Mix64(base ^ i) ^ j);
}

// Deterministic random stream. Bounded draws are implemented on top of the
// raw 64-bit output (rejection sampling) rather than
// std::uniform_int_distribution, whose mapping is implementation-defined;
// this keeps trajectories bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t NextU64() { return gen_(); }

  // Uniform draw from [0, bound). bound must be >= 1. Always consumes at
  // least one raw draw, even for bound == 1.
  int UniformInt(int bound) {
    const std::uint64_t n = static_cast<std::uint64_t>(bound);
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = NextU64();
      if (x >= threshold) return static_cast<int>(x % n);
    }
  }

  // Uniform draw from [0, 1) with 53 bits of precision.
  double UniformDouble() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace anyplay

#endif  // ANYPLAY_RNG_H_
