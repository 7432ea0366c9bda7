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

#include "scmc/entropy_model.hpp"
#include "scmc/latents.hpp"
#include "scmc/layers.hpp"
#include "scmc/rng.hpp"

namespace scmc {

enum class QuantMode : uint8_t {
  kRound = 0,      // nearest integer, ties away from zero, clamped (inference)
  kNoise = 1,      // additive uniform(-0.5, 0.5) proxy (training)
  kSoftround = 2,  // smooth rounding with a temperature (training)
};

/// Per-patch or aggregate rate-distortion numbers.
/// Invariant: loss == distortion_mse + lambda * rate_bits / pixel_count.
struct RDStats {
  double rate_bits = 0.0;
  double distortion_mse = 0.0;
  double lambda = 0.0;
  double loss = 0.0;
  int64_t pixel_count = 0;

  static RDStats make(double mse, double bits, double lambda, int64_t pixel_count);
  double rate_bpp() const {
    return pixel_count > 0 ? rate_bits / static_cast<double>(pixel_count) : 0.0;
  }
};

/// Shared codec topology: the analysis stack maps (3, P, P) to
/// (C, P/4, P/4) for P a multiple of 4, and synthesis maps back.
struct CodecArch {
  int latent_channels = 12;
  int downsample = 4;
  std::vector<LayerSpec> analysis;
  std::vector<LayerSpec> synthesis;

  static CodecArch standard(int latent_channels = 12);
  void validate() const;
  bool operator==(const CodecArch& o) const;
};

/// Rounds to the nearest integer (ties away from zero) and clamps to the
/// alphabet. Input must be a single-batch tensor.
LatentGrid quantize_round(const Tensor4& y);

/// Training-time quantization proxies. For kNoise draws one uniform offset
/// per element from rng; for kSoftround applies a smooth rounding with the
/// given temperature (> 0) and, if d_dy is non-null, writes the elementwise
/// derivative of the output w.r.t. the input.
Tensor4 quantize_train(const Tensor4& y, QuantMode mode, Rng& rng, double temperature,
                       Tensor4* d_dy = nullptr);

/// One complete lightweight codec: analysis transform, synthesis transform,
/// and factorized entropy model parameters, plus its rate-distortion loss.
class Codec {
 public:
  explicit Codec(const CodecArch& arch);

  void init_params(Rng& rng);

  /// Analysis transform. x is (1, 3, H, W) with H, W multiples of 4.
  Tensor4 analyze(const Tensor4& x, bool record = false);

  /// Synthesis from continuous latents (training path, never clamped).
  Tensor4 synthesize(const Tensor4& latents, bool record = false);

  /// Synthesis from quantized symbols; clamps to [0, 1] when clamp is set.
  Tensor4 synthesize_latents(const LatentGrid& latents, bool clamp);

  /// Exact coding cost of quantized latents under this codec's model.
  double rate_bits(const LatentGrid& latents) const;

  /// Inference-mode RD evaluation: round quantization, exact rate, clamped
  /// reconstruction. This is the loss used for mode selection.
  RDStats evaluate_rd(const Tensor4& x, double lambda);

  /// Training-mode RD loss. Differentiable end to end; accumulates
  /// parameter gradients when backprop is set. noise_override, when given,
  /// fixes the additive-noise realization (for gradient checks).
  RDStats rd_loss(const Tensor4& x, double lambda, QuantMode mode, Rng& rng,
                  double softround_temperature = 0.3, bool backprop = false,
                  const Tensor4* noise_override = nullptr);

  /// All trainable parameters in declaration order: analysis weights,
  /// synthesis weights, entropy log-scales.
  std::vector<ParamView> params();
  std::vector<ConstParamBlob> param_data() const;
  void zero_grad();
  void scale_grads(float factor);

  const CodecArch& arch() const { return arch_; }
  std::vector<float>& log_scales() { return log_scales_; }
  const std::vector<float>& log_scales() const { return log_scales_; }

 private:
  CodecArch arch_;
  Sequential analysis_;
  Sequential synthesis_;
  std::vector<float> log_scales_;
  std::vector<float> log_scales_grad_;
};

/// Mean squared error over all elements (pixels in [0, 1], all 3 channels).
double mse(const Tensor4& a, const Tensor4& b);

}  // namespace scmc
