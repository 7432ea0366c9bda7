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

#include <string>
#include <vector>

#include "scmc/codec.hpp"

namespace scmc {

/// The set of M competing codecs sharing one architecture, plus the
/// rate-distortion weight they were trained for.
///
/// File format ("SCMC" bundle, all integers little-endian):
///   magic "SCMC" | version u16 | arch descriptor | M u16 | lambda f64 |
///   M parameter blobs (f32 each, declaration order: analysis conv
///   weights+biases, synthesis conv weights+biases, per-channel entropy
///   log-scales) | crc32 u32 over all prior bytes.
/// Arch descriptor: latent_channels u16 | downsample u16 | analysis layer
/// count u16 | synthesis layer count u16 | per layer: kind u8, in_ch u16,
/// out_ch u16, kernel u16, stride u16, negative_slope f32.
struct CodecBundle {
  CodecArch arch;
  std::vector<Codec> codecs;
  double lambda = 0.0;

  int mode_count() const { return static_cast<int>(codecs.size()); }
  void validate() const;

  /// Serialized bytes including the trailing checksum.
  std::vector<uint8_t> serialize() const;
  /// The trailing checksum value; doubles as the bundle id carried in
  /// bitstream headers.
  uint32_t checksum() const;

  static CodecBundle deserialize(const uint8_t* data, size_t size);

  void save(const std::string& path) const;
  static CodecBundle load(const std::string& path);

  /// M codecs with seeded random analysis/synthesis weights and unit
  /// entropy scales.
  static CodecBundle random_init(const CodecArch& arch, int mode_count, double lambda,
                                 uint64_t seed);
};

constexpr uint16_t kBundleFormatVersion = 1;

}  // namespace scmc
