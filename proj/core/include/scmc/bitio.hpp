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
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace scmc {

/// CRC-32 (IEEE, reflected 0xEDB88320) over a byte range.
uint32_t crc32(const uint8_t* data, size_t size, uint32_t seed = 0);

/// Raised for malformed or truncated serialized inputs; carries the byte
/// offset at which parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

/// Little-endian byte sink.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) {
    buf_.push_back(static_cast<uint8_t>(v));
    buf_.push_back(static_cast<uint8_t>(v >> 8));
  }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void bytes(const uint8_t* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }
  void magic(const char tag[5]) { bytes(reinterpret_cast<const uint8_t*>(tag), 4); }

  size_t size() const { return buf_.size(); }
  const std::vector<uint8_t>& data() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

/// Little-endian byte source with offset-carrying errors.
class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  void bytes(uint8_t* dst, size_t n) {
    need(n);
    std::memcpy(dst, data_ + pos_, n);
    pos_ += n;
  }
  void expect_magic(const char tag[5], const std::string& what) {
    char got[4];
    bytes(reinterpret_cast<uint8_t*>(got), 4);
    if (std::memcmp(got, tag, 4) != 0) throw ParseError("bad magic for " + what, pos_ - 4);
  }
  void skip(size_t n) {
    need(n);
    pos_ += n;
  }

  size_t pos() const { return pos_; }
  size_t remaining() const { return size_ - pos_; }

 private:
  void need(size_t n) {
    if (size_ - pos_ < n) throw ParseError("truncated input", pos_);
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

/// MSB-first bit packer (fixed-length codes, zero-padded to a byte).
class BitWriter {
 public:
  void put(uint32_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) {
      cur_ = static_cast<uint8_t>((cur_ << 1) | ((value >> i) & 1u));
      if (++fill_ == 8) {
        buf_.push_back(cur_);
        cur_ = 0;
        fill_ = 0;
      }
    }
  }
  std::vector<uint8_t> finish() {
    if (fill_ > 0) {
      buf_.push_back(static_cast<uint8_t>(cur_ << (8 - fill_)));
      cur_ = 0;
      fill_ = 0;
    }
    return std::move(buf_);
  }

 private:
  std::vector<uint8_t> buf_;
  uint8_t cur_ = 0;
  int fill_ = 0;
};

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  uint32_t get(int bits) {
    uint32_t v = 0;
    for (int i = 0; i < bits; ++i) {
      const size_t byte = bit_ >> 3;
      if (byte >= size_) throw ParseError("bit stream exhausted", byte);
      const int shift = 7 - static_cast<int>(bit_ & 7);
      v = (v << 1) | ((data_[byte] >> shift) & 1u);
      ++bit_;
    }
    return v;
  }

 private:
  const uint8_t* data_;
  size_t size_;
  size_t bit_ = 0;
};

}  // namespace scmc
