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

#include "scmc/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scmc {

namespace {
constexpr uint32_t kRenormThreshold = 1u << 24;
}

bool CdfTable::valid() const {
  if (cum[0] != 0 || cum[kAlphabetSize] != kFreqTotal) return false;
  for (int i = 0; i < kAlphabetSize; ++i) {
    if (cum[i + 1] <= cum[i]) return false;
  }
  return true;
}

CdfTable build_cdf(const ChannelPmf& pmf) {
  std::array<uint32_t, kAlphabetSize> freq{};
  std::array<double, kAlphabetSize> remainder{};
  uint64_t assigned = 0;
  for (int i = 0; i < kAlphabetSize; ++i) {
    const double ideal = pmf[i] * static_cast<double>(kFreqTotal);
    const double fl = std::floor(ideal);
    freq[i] = static_cast<uint32_t>(fl);
    remainder[i] = ideal - fl;
    assigned += freq[i];
  }
  // Largest-remainder distribution of the leftover mass; ties by index.
  int64_t deficit = static_cast<int64_t>(kFreqTotal) - static_cast<int64_t>(assigned);
  std::array<int, kAlphabetSize> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return a < b;
  });
  for (int j = 0; deficit > 0 && j < kAlphabetSize; ++j, --deficit) freq[order[j]] += 1;
  while (deficit < 0) {  // float round-off can overshoot by a count or two
    int big = static_cast<int>(
        std::max_element(freq.begin(), freq.end()) - freq.begin());
    freq[big] -= 1;
    ++deficit;
  }
  // The probability floor keeps every ideal near or above 1, but enforce
  // freq >= 1 mechanically: steal from the largest bucket.
  for (int i = 0; i < kAlphabetSize; ++i) {
    if (freq[i] != 0) continue;
    int big = static_cast<int>(
        std::max_element(freq.begin(), freq.end()) - freq.begin());
    freq[big] -= 1;
    freq[i] = 1;
  }
  CdfTable t;
  t.cum[0] = 0;
  for (int i = 0; i < kAlphabetSize; ++i) t.cum[i + 1] = t.cum[i] + freq[i];
  return t;
}

CdfTable build_cdf(double sigma) { return build_cdf(floored_pmf(sigma)); }

// ---------------------------------------------------------------------------
// RangeEncoder

void RangeEncoder::propagate_carry() {
  for (size_t i = out_.size(); i-- > 0;) {
    if (++out_[i] != 0) return;
  }
  throw std::logic_error("range coder: carry out of an empty prefix");
}

void RangeEncoder::encode(uint32_t cum_lo, uint32_t freq) {
  range_ >>= kFreqBits;
  low_ += static_cast<uint64_t>(cum_lo) * range_;
  if (low_ >> 32) {
    propagate_carry();
    low_ &= 0xFFFFFFFFull;
  }
  range_ *= freq;
  while (range_ < kRenormThreshold) {
    out_.push_back(static_cast<uint8_t>(low_ >> 24));
    low_ = (low_ << 8) & 0xFFFFFFFFull;
    range_ <<= 8;
  }
}

void RangeEncoder::encode_symbol(const CdfTable& table, int symbol) {
  if (symbol < kAlphabetMin || symbol > kAlphabetMax)
    throw std::invalid_argument("range coder: symbol outside alphabet");
  const int idx = symbol - kAlphabetMin;
  encode(table.cum[idx], table.freq(idx));
}

std::vector<uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 4; ++i) {
    out_.push_back(static_cast<uint8_t>(low_ >> 24));
    low_ = (low_ << 8) & 0xFFFFFFFFull;
  }
  return std::move(out_);
}

// ---------------------------------------------------------------------------
// RangeDecoder

RangeDecoder::RangeDecoder(const uint8_t* data, size_t size) : data_(data), size_(size) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ < size_) return data_[pos_++];
  ++pos_;
  return 0;
}

int RangeDecoder::decode_symbol(const CdfTable& table) {
  const uint32_t r = range_ >> kFreqBits;
  uint32_t dv = code_ / r;
  if (dv >= kFreqTotal) dv = kFreqTotal - 1;
  // First index whose upper cumulative bound exceeds dv.
  const auto it = std::upper_bound(table.cum.begin() + 1, table.cum.end(), dv);
  const int idx = static_cast<int>(it - table.cum.begin()) - 1;
  code_ -= table.cum[idx] * r;
  range_ = r * table.freq(idx);
  while (range_ < kRenormThreshold) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return idx + kAlphabetMin;
}

// ---------------------------------------------------------------------------

std::vector<uint8_t> encode_symbols(const std::vector<int16_t>& symbols,
                                    const std::vector<const CdfTable*>& tables) {
  if (symbols.size() != tables.size())
    throw std::invalid_argument("encode_symbols: one table per symbol required");
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) enc.encode_symbol(*tables[i], symbols[i]);
  return enc.finish();
}

std::vector<int16_t> decode_symbols(const uint8_t* data, size_t size,
                                    const std::vector<const CdfTable*>& tables) {
  RangeDecoder dec(data, size);
  std::vector<int16_t> out(tables.size());
  for (size_t i = 0; i < tables.size(); ++i)
    out[i] = static_cast<int16_t>(dec.decode_symbol(*tables[i]));
  return out;
}

}  // namespace scmc
