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

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scmc {

/// Dense 4-D float tensor with (batch, channels, height, width) layout,
/// row-major within (c, h, w). The workhorse of the numeric kernel.
struct Tensor4 {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<float> v;

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_), v(static_cast<size_t>(n_) * c_ * h_ * w_, 0.0f) {
    if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0) {
      throw std::invalid_argument("Tensor4: negative dimension");
    }
  }

  size_t size() const { return v.size(); }
  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }

  size_t index(int in, int ic, int iy, int ix) const {
    return ((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix;
  }
  float& at(int in, int ic, int iy, int ix) { return v[index(in, ic, iy, ix)]; }
  const float& at(int in, int ic, int iy, int ix) const {
    return v[index(in, ic, iy, ix)];
  }

  /// Pointer to the start of one (batch, channel) plane of h*w values.
  float* plane(int in, int ic) { return v.data() + (static_cast<size_t>(in) * c + ic) * h * w; }
  const float* plane(int in, int ic) const {
    return v.data() + (static_cast<size_t>(in) * c + ic) * h * w;
  }

  void fill(float x) { std::fill(v.begin(), v.end(), x); }
};

bool all_finite(const Tensor4& t);

}  // namespace scmc
