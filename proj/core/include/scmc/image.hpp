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
#include <string>
#include <vector>

namespace scmc {

/// Planar RGB image, channel-major (3, h, w), values in [0, 1].
struct Image {
  int h = 0;
  int w = 0;
  std::vector<float> v;

  Image() = default;
  Image(int h_, int w_) : h(h_), w(w_), v(static_cast<size_t>(3) * h_ * w_, 0.0f) {}

  float& at(int c, int y, int x) {
    return v[(static_cast<size_t>(c) * h + y) * w + x];
  }
  float at(int c, int y, int x) const {
    return v[(static_cast<size_t>(c) * h + y) * w + x];
  }
  size_t pixel_count() const { return static_cast<size_t>(h) * w; }
};

/// Reads a binary PPM (P6, maxval 255). Throws std::runtime_error with the
/// path on unreadable or undecodable files.
Image read_ppm(const std::string& path);

/// Writes a binary PPM (P6, maxval 255); values are clamped and rounded.
void write_ppm(const Image& img, const std::string& path);

/// Writes a binary PGM (P5, maxval 255).
void write_pgm(const std::vector<uint8_t>& gray, int h, int w, const std::string& path);

/// 8-bit quantization used by the PPM writer.
inline uint8_t to_byte(float v) {
  float x = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<uint8_t>(x * 255.0f + 0.5f);
}

}  // namespace scmc
