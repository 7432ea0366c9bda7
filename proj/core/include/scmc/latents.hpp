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
#include <vector>

namespace scmc {

/// Quantized latent symbol alphabet, inclusive.
constexpr int kAlphabetMin = -64;
constexpr int kAlphabetMax = 64;
constexpr int kAlphabetSize = kAlphabetMax - kAlphabetMin + 1;

/// Quantized integer latents for one patch, channel-major (c, h, w).
/// Every symbol lies in [kAlphabetMin, kAlphabetMax]; quantization clamps.
struct LatentGrid {
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<int16_t> v;

  LatentGrid() = default;
  LatentGrid(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_), v(static_cast<size_t>(c_) * h_ * w_, 0) {}

  size_t size() const { return v.size(); }
  int16_t& at(int ic, int iy, int ix) {
    return v[(static_cast<size_t>(ic) * h + iy) * w + ix];
  }
  int16_t at(int ic, int iy, int ix) const {
    return v[(static_cast<size_t>(ic) * h + iy) * w + ix];
  }
  bool operator==(const LatentGrid& o) const {
    return c == o.c && h == o.h && w == o.w && v == o.v;
  }
};

}  // namespace scmc
