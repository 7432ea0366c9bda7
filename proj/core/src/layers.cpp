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

#include "scmc/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmc {

bool all_finite(const Tensor4& t) {
  for (float x : t.v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void validate_spec(const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::kConv:
      if (spec.in_ch < 1 || spec.out_ch < 1)
        throw std::invalid_argument("conv: channel counts must be >= 1");
      if (spec.kernel < 1 || spec.kernel % 2 == 0)
        throw std::invalid_argument("conv: kernel must be odd and >= 1");
      if (spec.stride != 1 && spec.stride != 2)
        throw std::invalid_argument("conv: stride must be 1 or 2");
      break;
    case LayerKind::kUpsampleNearest:
      break;
    case LayerKind::kLeakyRelu:
      if (!(spec.negative_slope >= 0.0f))
        throw std::invalid_argument("leaky-relu: negative_slope must be >= 0");
      break;
  }
}

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(int in_ch, int out_ch, int kernel, int stride)
    : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), stride_(stride), pad_((kernel - 1) / 2) {
  validate_spec(LayerSpec::conv(in_ch, out_ch, kernel, stride));
  const size_t wn = static_cast<size_t>(out_ch_) * in_ch_ * k_ * k_;
  w_.assign(wn, 0.0f);
  b_.assign(out_ch_, 0.0f);
  gw_.assign(wn, 0.0f);
  gb_.assign(out_ch_, 0.0f);
}

Tensor4 Conv2d::forward(const Tensor4& x, bool record) {
  if (x.c != in_ch_) throw std::invalid_argument("conv2d: input channel mismatch");
  if (x.h < 1 || x.w < 1) throw std::invalid_argument("conv2d: empty input");
  const int oh = (x.h + stride_ - 1) / stride_;
  const int ow = (x.w + stride_ - 1) / stride_;
  Tensor4 y(x.n, out_ch_, oh, ow);
  for (int in = 0; in < x.n; ++in) {
    for (int oc = 0; oc < out_ch_; ++oc) {
      const float* wq = w_.data() + static_cast<size_t>(oc) * in_ch_ * k_ * k_;
      float* yp = y.plane(in, oc);
      for (int oy = 0; oy < oh; ++oy) {
        const int iy0 = oy * stride_ - pad_;
        const int ky_lo = std::max(0, -iy0);
        const int ky_hi = std::min(k_, x.h - iy0);
        for (int ox = 0; ox < ow; ++ox) {
          const int ix0 = ox * stride_ - pad_;
          const int kx_lo = std::max(0, -ix0);
          const int kx_hi = std::min(k_, x.w - ix0);
          double acc = b_[oc];  // 64-bit accumulation inside the reduction
          for (int ic = 0; ic < in_ch_; ++ic) {
            const float* xp = x.plane(in, ic);
            const float* wk = wq + static_cast<size_t>(ic) * k_ * k_;
            for (int ky = ky_lo; ky < ky_hi; ++ky) {
              const float* xrow = xp + static_cast<size_t>(iy0 + ky) * x.w + ix0;
              const float* wrow = wk + static_cast<size_t>(ky) * k_;
              for (int kx = kx_lo; kx < kx_hi; ++kx) {
                acc += static_cast<double>(xrow[kx]) * wrow[kx];
              }
            }
          }
          yp[static_cast<size_t>(oy) * ow + ox] = static_cast<float>(acc);
        }
      }
    }
  }
  if (record) {
    cached_in_ = x;
    recorded_ = true;
  }
  return y;
}

Tensor4 Conv2d::backward(const Tensor4& grad_out) {
  if (!recorded_) throw std::logic_error("conv2d: backward without recorded forward");
  const Tensor4& x = cached_in_;
  const int oh = (x.h + stride_ - 1) / stride_;
  const int ow = (x.w + stride_ - 1) / stride_;
  if (grad_out.n != x.n || grad_out.c != out_ch_ || grad_out.h != oh || grad_out.w != ow)
    throw std::invalid_argument("conv2d: grad_out shape mismatch");

  Tensor4 gx(x.n, x.c, x.h, x.w);
  std::vector<double> gx_acc(static_cast<size_t>(x.c) * x.h * x.w);
  std::vector<double> gw_acc(w_.size(), 0.0);
  std::vector<double> gb_acc(static_cast<size_t>(out_ch_), 0.0);

  for (int in = 0; in < x.n; ++in) {
    std::fill(gx_acc.begin(), gx_acc.end(), 0.0);
    for (int oc = 0; oc < out_ch_; ++oc) {
      const float* gp = grad_out.plane(in, oc);
      const float* wq = w_.data() + static_cast<size_t>(oc) * in_ch_ * k_ * k_;
      double* gwq = gw_acc.data() + static_cast<size_t>(oc) * in_ch_ * k_ * k_;
      for (int oy = 0; oy < oh; ++oy) {
        const int iy0 = oy * stride_ - pad_;
        const int ky_lo = std::max(0, -iy0);
        const int ky_hi = std::min(k_, x.h - iy0);
        for (int ox = 0; ox < ow; ++ox) {
          const double g = gp[static_cast<size_t>(oy) * ow + ox];
          gb_acc[oc] += g;
          if (g == 0.0) continue;
          const int ix0 = ox * stride_ - pad_;
          const int kx_lo = std::max(0, -ix0);
          const int kx_hi = std::min(k_, x.w - ix0);
          for (int ic = 0; ic < in_ch_; ++ic) {
            const float* xp = x.plane(in, ic);
            double* gxp = gx_acc.data() + static_cast<size_t>(ic) * x.h * x.w;
            const float* wk = wq + static_cast<size_t>(ic) * k_ * k_;
            double* gwk = gwq + static_cast<size_t>(ic) * k_ * k_;
            for (int ky = ky_lo; ky < ky_hi; ++ky) {
              const size_t row = static_cast<size_t>(iy0 + ky) * x.w + ix0;
              const float* xrow = xp + row;
              double* gxrow = gxp + row;
              const float* wrow = wk + static_cast<size_t>(ky) * k_;
              double* gwrow = gwk + static_cast<size_t>(ky) * k_;
              for (int kx = kx_lo; kx < kx_hi; ++kx) {
                gxrow[kx] += g * wrow[kx];
                gwrow[kx] += g * xrow[kx];
              }
            }
          }
        }
      }
    }
    float* dst = gx.plane(in, 0);
    for (size_t i = 0; i < gx_acc.size(); ++i) dst[i] = static_cast<float>(gx_acc[i]);
  }
  for (size_t i = 0; i < w_.size(); ++i) gw_[i] += static_cast<float>(gw_acc[i]);
  for (int oc = 0; oc < out_ch_; ++oc) gb_[oc] += static_cast<float>(gb_acc[oc]);
  return gx;
}

void Conv2d::collect_params(std::vector<ParamView>& out) {
  out.push_back({w_.data(), gw_.data(), w_.size()});
  out.push_back({b_.data(), gb_.data(), b_.size()});
}

void Conv2d::collect_param_data(std::vector<ConstParamBlob>& out) const {
  out.emplace_back(w_.data(), w_.size());
  out.emplace_back(b_.data(), b_.size());
}

void Conv2d::zero_grad() {
  std::fill(gw_.begin(), gw_.end(), 0.0f);
  std::fill(gb_.begin(), gb_.end(), 0.0f);
}

std::unique_ptr<Layer> Conv2d::clone() const {
  auto c = std::make_unique<Conv2d>(in_ch_, out_ch_, k_, stride_);
  c->w_ = w_;
  c->b_ = b_;
  return c;
}

// ---------------------------------------------------------------------------
// LeakyRelu

Tensor4 LeakyRelu::forward(const Tensor4& x, bool record) {
  Tensor4 y(x.n, x.c, x.h, x.w);
  for (size_t i = 0; i < x.size(); ++i) {
    const float v = x.v[i];
    y.v[i] = v >= 0.0f ? v : slope_ * v;
  }
  if (record) {
    cached_in_ = x;
    recorded_ = true;
  }
  return y;
}

Tensor4 LeakyRelu::backward(const Tensor4& grad_out) {
  if (!recorded_) throw std::logic_error("leaky-relu: backward without recorded forward");
  if (!grad_out.same_shape(cached_in_))
    throw std::invalid_argument("leaky-relu: grad_out shape mismatch");
  Tensor4 gx(grad_out.n, grad_out.c, grad_out.h, grad_out.w);
  for (size_t i = 0; i < gx.size(); ++i) {
    gx.v[i] = cached_in_.v[i] >= 0.0f ? grad_out.v[i] : slope_ * grad_out.v[i];
  }
  return gx;
}

std::unique_ptr<Layer> LeakyRelu::clone() const {
  return std::make_unique<LeakyRelu>(slope_);
}

// ---------------------------------------------------------------------------
// UpsampleNearest

Tensor4 UpsampleNearest::forward(const Tensor4& x, bool record) {
  Tensor4 y(x.n, x.c, x.h * 2, x.w * 2);
  for (int in = 0; in < x.n; ++in) {
    for (int ic = 0; ic < x.c; ++ic) {
      const float* xp = x.plane(in, ic);
      float* yp = y.plane(in, ic);
      for (int iy = 0; iy < x.h; ++iy) {
        for (int ix = 0; ix < x.w; ++ix) {
          const float v = xp[static_cast<size_t>(iy) * x.w + ix];
          float* dst = yp + (static_cast<size_t>(iy) * 2) * y.w + ix * 2;
          dst[0] = v;
          dst[1] = v;
          dst[y.w] = v;
          dst[y.w + 1] = v;
        }
      }
    }
  }
  if (record) {
    in_n_ = x.n;
    in_c_ = x.c;
    in_h_ = x.h;
    in_w_ = x.w;
    recorded_ = true;
  }
  return y;
}

Tensor4 UpsampleNearest::backward(const Tensor4& grad_out) {
  if (!recorded_) throw std::logic_error("upsample: backward without recorded forward");
  if (grad_out.n != in_n_ || grad_out.c != in_c_ || grad_out.h != in_h_ * 2 ||
      grad_out.w != in_w_ * 2)
    throw std::invalid_argument("upsample: grad_out shape mismatch");
  Tensor4 gx(in_n_, in_c_, in_h_, in_w_);
  for (int in = 0; in < in_n_; ++in) {
    for (int ic = 0; ic < in_c_; ++ic) {
      const float* gp = grad_out.plane(in, ic);
      float* gxp = gx.plane(in, ic);
      for (int iy = 0; iy < in_h_; ++iy) {
        for (int ix = 0; ix < in_w_; ++ix) {
          const float* src = gp + (static_cast<size_t>(iy) * 2) * grad_out.w + ix * 2;
          const double s = static_cast<double>(src[0]) + src[1] + src[grad_out.w] +
                           src[grad_out.w + 1];
          gxp[static_cast<size_t>(iy) * in_w_ + ix] = static_cast<float>(s);
        }
      }
    }
  }
  return gx;
}

std::unique_ptr<Layer> UpsampleNearest::clone() const {
  return std::make_unique<UpsampleNearest>();
}

// ---------------------------------------------------------------------------
// Sequential

namespace {
std::unique_ptr<Layer> build_layer(const LayerSpec& spec) {
  validate_spec(spec);
  switch (spec.kind) {
    case LayerKind::kConv:
      return std::make_unique<Conv2d>(spec.in_ch, spec.out_ch, spec.kernel, spec.stride);
    case LayerKind::kUpsampleNearest:
      return std::make_unique<UpsampleNearest>();
    case LayerKind::kLeakyRelu:
      return std::make_unique<LeakyRelu>(spec.negative_slope);
  }
  throw std::invalid_argument("unknown layer kind");
}
}  // namespace

Sequential::Sequential(const std::vector<LayerSpec>& specs) {
  layers_.reserve(specs.size());
  for (const auto& s : specs) layers_.push_back(build_layer(s));
}

Sequential::Sequential(const Sequential& o) {
  layers_.reserve(o.layers_.size());
  for (const auto& l : o.layers_) layers_.push_back(l->clone());
}

Sequential& Sequential::operator=(const Sequential& o) {
  if (this != &o) {
    layers_.clear();
    layers_.reserve(o.layers_.size());
    for (const auto& l : o.layers_) layers_.push_back(l->clone());
  }
  return *this;
}

Tensor4 Sequential::forward(const Tensor4& x, bool record) {
  Tensor4 cur = x;
  for (auto& l : layers_) cur = l->forward(cur, record);
  return cur;
}

Tensor4 Sequential::backward(const Tensor4& grad_out) {
  Tensor4 cur = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) cur = (*it)->backward(cur);
  return cur;
}

void Sequential::collect_params(std::vector<ParamView>& out) {
  for (auto& l : layers_) l->collect_params(out);
}

void Sequential::collect_param_data(std::vector<ConstParamBlob>& out) const {
  for (const auto& l : layers_) l->collect_param_data(out);
}

std::vector<ParamView> Sequential::params() {
  std::vector<ParamView> out;
  collect_params(out);
  return out;
}

void Sequential::zero_grad() {
  for (auto& l : layers_) l->zero_grad();
}

void Sequential::init_params(Rng& rng) {
  for (auto& l : layers_) {
    auto* conv = dynamic_cast<Conv2d*>(l.get());
    if (!conv) continue;
    const LayerSpec s = conv->spec();
    const float fan_in = static_cast<float>(s.in_ch) * s.kernel * s.kernel;
    const float limit = std::sqrt(6.0f / fan_in);
    for (float& w : conv->weights()) w = rng.next_uniform(-limit, limit);
    std::fill(conv->bias().begin(), conv->bias().end(), 0.0f);
  }
}

std::vector<LayerSpec> Sequential::specs() const {
  std::vector<LayerSpec> out;
  out.reserve(layers_.size());
  for (const auto& l : layers_) out.push_back(l->spec());
  return out;
}

}  // namespace scmc
