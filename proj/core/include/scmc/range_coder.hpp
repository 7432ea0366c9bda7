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

#include <array>
#include <cstdint>
#include <vector>

#include "scmc/entropy_model.hpp"
#include "scmc/latents.hpp"

namespace scmc {

/// Total cumulative frequency of every table: 16-bit precision.
constexpr uint32_t kFreqBits = 16;
constexpr uint32_t kFreqTotal = 1u << kFreqBits;

/// Static cumulative frequencies over the alphabet for one latent channel.
/// cum[0] == 0, cum[kAlphabetSize] == 2^16, strictly increasing (every
/// symbol has frequency >= 1).
struct CdfTable {
  std::array<uint32_t, kAlphabetSize + 1> cum{};

  uint32_t freq(int index) const { return cum[index + 1] - cum[index]; }
  uint32_t freq_of_symbol(int symbol) const { return freq(symbol - kAlphabetMin); }
  bool valid() const;
};

/// Quantizes a floored, renormalized pmf to integer frequencies summing to
/// 2^16 with deterministic largest-remainder rounding; every symbol keeps
/// frequency >= 1.
CdfTable build_cdf(const ChannelPmf& pmf);

/// Table for one channel of the factorized entropy model.
CdfTable build_cdf(double sigma);

/// Byte-oriented static range encoder. Single-use: encode symbols, then
/// finish() exactly once. Integer-only arithmetic, so output is identical
/// on any platform.
class RangeEncoder {
 public:
  void encode(uint32_t cum_lo, uint32_t freq);
  void encode_symbol(const CdfTable& table, int symbol);
  /// Flushes the coder state and returns the payload.
  std::vector<uint8_t> finish();
  size_t size_so_far() const { return out_.size(); }

 private:
  void propagate_carry();
  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  std::vector<uint8_t> out_;
};

/// Mirror of RangeEncoder. Reads past-the-end bytes as zero; garbage input
/// yields garbage symbols, which the container-level checksum guards.
class RangeDecoder {
 public:
  RangeDecoder(const uint8_t* data, size_t size);

  int decode_symbol(const CdfTable& table);
  size_t consumed() const { return pos_; }

 private:
  uint8_t next_byte();
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t code_ = 0;
};

/// Convenience round-trip API over per-symbol tables (tables.size() must
/// equal symbols.size(); entries may repeat).
std::vector<uint8_t> encode_symbols(const std::vector<int16_t>& symbols,
                                    const std::vector<const CdfTable*>& tables);
std::vector<int16_t> decode_symbols(const uint8_t* data, size_t size,
                                    const std::vector<const CdfTable*>& tables);

}  // namespace scmc
