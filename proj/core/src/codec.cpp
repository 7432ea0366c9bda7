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

#include "scmc/codec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmc {

RDStats RDStats::make(double mse, double bits, double lambda, int64_t pixel_count) {
  RDStats s;
  s.distortion_mse = mse;
  s.rate_bits = bits;
  s.lambda = lambda;
  s.pixel_count = pixel_count;
  s.loss = mse + lambda * (pixel_count > 0 ? bits / static_cast<double>(pixel_count) : 0.0);
  return s;
}

CodecArch CodecArch::standard(int latent_channels) {
  CodecArch arch;
  arch.latent_channels = latent_channels;
  arch.downsample = 4;
  arch.analysis = {
      LayerSpec::conv(3, 32, 5, 2),
      LayerSpec::leaky_relu(0.2f),
      LayerSpec::conv(32, 32, 3, 1),
      LayerSpec::leaky_relu(0.2f),
      LayerSpec::conv(32, latent_channels, 3, 2),
  };
  arch.synthesis = {
      LayerSpec::conv(latent_channels, 16, 3, 1),
      LayerSpec::leaky_relu(0.2f),
      LayerSpec::upsample(),
      LayerSpec::conv(16, 16, 3, 1),
      LayerSpec::leaky_relu(0.2f),
      LayerSpec::upsample(),
      LayerSpec::conv(16, 3, 3, 1),
  };
  arch.validate();
  return arch;
}

namespace {
// Walks a stack tracking (channels, numerator/denominator spatial scale).
void walk_stack(const std::vector<LayerSpec>& specs, int in_ch, int* out_ch, int* scale_num,
                int* scale_den) {
  int ch = in_ch;
  int num = 1, den = 1;
  for (const auto& s : specs) {
    validate_spec(s);
    switch (s.kind) {
      case LayerKind::kConv:
        if (s.in_ch != ch) throw std::invalid_argument("arch: channel chain mismatch");
        ch = s.out_ch;
        den *= s.stride;
        break;
      case LayerKind::kUpsampleNearest:
        num *= 2;
        break;
      case LayerKind::kLeakyRelu:
        break;
    }
  }
  *out_ch = ch;
  *scale_num = num;
  *scale_den = den;
}
}  // namespace

void CodecArch::validate() const {
  if (latent_channels < 1) throw std::invalid_argument("arch: latent_channels must be >= 1");
  if (downsample != 4) throw std::invalid_argument("arch: downsample factor is fixed at 4");
  int ch, num, den;
  walk_stack(analysis, 3, &ch, &num, &den);
  if (ch != latent_channels || num != 1 || den != downsample)
    throw std::invalid_argument("arch: analysis must map (3,P,P) to (C,P/4,P/4)");
  walk_stack(synthesis, latent_channels, &ch, &num, &den);
  if (ch != 3 || num != downsample || den != 1)
    throw std::invalid_argument("arch: synthesis must map (C,h,w) to (3,4h,4w)");
}

bool CodecArch::operator==(const CodecArch& o) const {
  auto same = [](const std::vector<LayerSpec>& a, const std::vector<LayerSpec>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      const LayerSpec &x = a[i], &y = b[i];
      if (x.kind != y.kind || x.in_ch != y.in_ch || x.out_ch != y.out_ch ||
          x.kernel != y.kernel || x.stride != y.stride ||
          x.negative_slope != y.negative_slope)
        return false;
    }
    return true;
  };
  return latent_channels == o.latent_channels && downsample == o.downsample &&
         same(analysis, o.analysis) && same(synthesis, o.synthesis);
}

LatentGrid quantize_round(const Tensor4& y) {
  if (y.n != 1) throw std::invalid_argument("quantize_round: single-batch tensor expected");
  LatentGrid g(y.c, y.h, y.w);
  for (size_t i = 0; i < y.size(); ++i) {
    // std::round ties away from zero, matching the alphabet symmetry.
    float r = std::round(y.v[i]);
    r = std::min(static_cast<float>(kAlphabetMax), std::max(static_cast<float>(kAlphabetMin), r));
    g.v[i] = static_cast<int16_t>(r);
  }
  return g;
}

Tensor4 quantize_train(const Tensor4& y, QuantMode mode, Rng& rng, double temperature,
                       Tensor4* d_dy) {
  Tensor4 out(y.n, y.c, y.h, y.w);
  if (d_dy) *d_dy = Tensor4(y.n, y.c, y.h, y.w);
  switch (mode) {
    case QuantMode::kNoise:
      for (size_t i = 0; i < y.size(); ++i) {
        out.v[i] = y.v[i] + static_cast<float>(rng.next_real01() - 0.5);
        if (d_dy) d_dy->v[i] = 1.0f;
      }
      return out;
    case QuantMode::kSoftround: {
      if (!(temperature > 0.0))
        throw std::invalid_argument("quantize: softround requires temperature > 0");
      const double t = temperature;
      const double norm = std::tanh(0.5 / t);
      for (size_t i = 0; i < y.size(); ++i) {
        const double v = y.v[i];
        const double base = std::floor(v);
        const double delta = v - base - 0.5;
        const double th = std::tanh(delta / t);
        out.v[i] = static_cast<float>(base + 0.5 + 0.5 * th / norm);
        if (d_dy) d_dy->v[i] = static_cast<float>(0.5 * (1.0 - th * th) / (t * norm));
      }
      return out;
    }
    case QuantMode::kRound:
      throw std::invalid_argument("quantize_train: round mode is inference-only");
  }
  throw std::invalid_argument("quantize_train: unknown mode");
}

Codec::Codec(const CodecArch& arch)
    : arch_(arch), analysis_(arch.analysis), synthesis_(arch.synthesis) {
  arch_.validate();
  log_scales_.assign(arch_.latent_channels, 0.0f);
  log_scales_grad_.assign(arch_.latent_channels, 0.0f);
}

void Codec::init_params(Rng& rng) {
  analysis_.init_params(rng);
  synthesis_.init_params(rng);
  std::fill(log_scales_.begin(), log_scales_.end(), 0.0f);
}

Tensor4 Codec::analyze(const Tensor4& x, bool record) {
  if (x.c != 3) throw std::invalid_argument("analyze: input must have 3 channels");
  if (x.h % 4 != 0 || x.w % 4 != 0)
    throw std::invalid_argument("analyze: patch dims must be multiples of 4");
  return analysis_.forward(x, record);
}

Tensor4 Codec::synthesize(const Tensor4& latents, bool record) {
  if (latents.c != arch_.latent_channels)
    throw std::invalid_argument("synthesize: latent channel mismatch");
  return synthesis_.forward(latents, record);
}

Tensor4 Codec::synthesize_latents(const LatentGrid& latents, bool clamp) {
  Tensor4 y(1, latents.c, latents.h, latents.w);
  for (size_t i = 0; i < latents.size(); ++i) y.v[i] = static_cast<float>(latents.v[i]);
  Tensor4 x = synthesize(y, false);
  if (clamp) {
    for (float& v : x.v) v = std::min(1.0f, std::max(0.0f, v));
  }
  return x;
}

double Codec::rate_bits(const LatentGrid& latents) const {
  return rate_estimate_bits(latents, log_scales_);
}

double mse(const Tensor4& a, const Tensor4& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mse: shape mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.v[i]) - b.v[i];
    acc += d * d;
  }
  return a.size() ? acc / static_cast<double>(a.size()) : 0.0;
}

RDStats Codec::evaluate_rd(const Tensor4& x, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("evaluate_rd: lambda must be > 0");
  const Tensor4 y = analyze(x, false);
  const LatentGrid lat = quantize_round(y);
  const double bits = rate_bits(lat);
  const Tensor4 recon = synthesize_latents(lat, /*clamp=*/true);
  return RDStats::make(mse(recon, x), bits, lambda, static_cast<int64_t>(x.h) * x.w);
}

RDStats Codec::rd_loss(const Tensor4& x, double lambda, QuantMode mode, Rng& rng,
                       double softround_temperature, bool backprop,
                       const Tensor4* noise_override) {
  if (!(lambda > 0.0)) throw std::invalid_argument("rd_loss: lambda must be > 0");
  if (mode == QuantMode::kRound) {
    return evaluate_rd(x, lambda);
  }
  const int64_t pixels = static_cast<int64_t>(x.h) * x.w;

  Tensor4 y = analyze(x, backprop);
  Tensor4 dq_dy;
  Tensor4 yq;
  if (mode == QuantMode::kNoise && noise_override) {
    if (!noise_override->same_shape(y))
      throw std::invalid_argument("rd_loss: noise override shape mismatch");
    yq = y;
    for (size_t i = 0; i < yq.size(); ++i) yq.v[i] += noise_override->v[i];
    dq_dy = Tensor4(y.n, y.c, y.h, y.w);
    dq_dy.fill(1.0f);
  } else {
    yq = quantize_train(y, mode, rng, softround_temperature, backprop ? &dq_dy : nullptr);
  }

  // Differentiable rate under the continuous model.
  double bits = 0.0;
  Tensor4 dbits_dyq(yq.n, yq.c, yq.h, yq.w);
  std::vector<double> dbits_dls(arch_.latent_channels, 0.0);
  const size_t plane = static_cast<size_t>(yq.h) * yq.w;
  for (int ic = 0; ic < yq.c; ++ic) {
    const double ls = log_scales_[ic];
    const float* p = yq.plane(0, ic);
    float* dp = dbits_dyq.plane(0, ic);
    for (size_t i = 0; i < plane; ++i) {
      double dv, dls;
      bits += continuous_rate_bits(p[i], ls, &dv, &dls);
      dp[i] = static_cast<float>(dv);
      dbits_dls[ic] += dls;
    }
  }

  Tensor4 recon = synthesize(yq, backprop);  // unclamped during training
  const double d = mse(recon, x);
  RDStats stats = RDStats::make(d, bits, lambda, pixels);

  if (backprop) {
    const double rate_w = lambda / static_cast<double>(pixels);
    // Distortion path: dL/drecon = 2 (recon - x) / numel.
    Tensor4 grecon(recon.n, recon.c, recon.h, recon.w);
    const double inv = 2.0 / static_cast<double>(recon.size());
    for (size_t i = 0; i < recon.size(); ++i)
      grecon.v[i] = static_cast<float>(inv * (static_cast<double>(recon.v[i]) - x.v[i]));
    Tensor4 gyq = synthesis_.backward(grecon);
    // Add the rate path and undo the quantizer reparameterization.
    Tensor4 gy(y.n, y.c, y.h, y.w);
    for (size_t i = 0; i < gy.size(); ++i) {
      const double total = static_cast<double>(gyq.v[i]) + rate_w * dbits_dyq.v[i];
      gy.v[i] = static_cast<float>(total * dq_dy.v[i]);
    }
    analysis_.backward(gy);
    for (int ic = 0; ic < arch_.latent_channels; ++ic)
      log_scales_grad_[ic] += static_cast<float>(rate_w * dbits_dls[ic]);
  }
  return stats;
}

std::vector<ParamView> Codec::params() {
  std::vector<ParamView> out;
  analysis_.collect_params(out);
  synthesis_.collect_params(out);
  out.push_back({log_scales_.data(), log_scales_grad_.data(), log_scales_.size()});
  return out;
}

std::vector<ConstParamBlob> Codec::param_data() const {
  std::vector<ConstParamBlob> out;
  analysis_.collect_param_data(out);
  synthesis_.collect_param_data(out);
  out.emplace_back(log_scales_.data(), log_scales_.size());
  return out;
}

void Codec::zero_grad() {
  analysis_.zero_grad();
  synthesis_.zero_grad();
  std::fill(log_scales_grad_.begin(), log_scales_grad_.end(), 0.0f);
}

void Codec::scale_grads(float factor) {
  for (auto& p : params()) {
    for (size_t i = 0; i < p.count; ++i) p.grad[i] *= factor;
  }
}

}  // namespace scmc
