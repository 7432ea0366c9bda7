/*
 * Copyright 2026 The scmc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace scmc {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded PRNG wrapper. std::mt19937_64 output is fully specified by the
/// standard; the derived draws below avoid std::*_distribution, whose
/// results differ between standard-library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  uint32_t next_below(uint32_t bound) {
    return static_cast<uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  float next_uniform(float lo, float hi) {
    return lo + static_cast<float>(next_real01()) * (hi - lo);
  }

  /// Deterministic sub-seed derivation for independent streams.
  static uint64_t mix(std::initializer_list<uint64_t> parts) {
    uint64_t s = 0x5bd1e995726f6e1bULL;
    uint64_t out = 0;
    for (uint64_t p : parts) {
      s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
      out = splitmix64(s);
    }
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace scmc
