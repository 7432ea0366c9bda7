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

#include <memory>
#include <vector>

#include "scmc/rng.hpp"
#include "scmc/tensor.hpp"

namespace scmc {

enum class LayerKind : uint8_t {
  kConv = 0,
  kUpsampleNearest = 1,
  kLeakyRelu = 2,
};

/// Declarative description of one layer. Convolutions use symmetric zero
/// padding of (kernel-1)/2, so stride-1 layers preserve spatial dims and
/// stride-2 layers halve them (ceiling). Nearest upsampling doubles both
/// spatial dims exactly.
struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int in_ch = 0;
  int out_ch = 0;
  int kernel = 0;
  int stride = 1;
  float negative_slope = 0.0f;

  static LayerSpec conv(int in_ch, int out_ch, int kernel, int stride) {
    return {LayerKind::kConv, in_ch, out_ch, kernel, stride, 0.0f};
  }
  static LayerSpec upsample() { return {LayerKind::kUpsampleNearest, 0, 0, 0, 1, 0.0f}; }
  static LayerSpec leaky_relu(float slope) {
    return {LayerKind::kLeakyRelu, 0, 0, 0, 1, slope};
  }
};

void validate_spec(const LayerSpec& spec);

/// Mutable view of one parameter tensor and its gradient accumulator.
struct ParamView {
  float* value = nullptr;
  float* grad = nullptr;
  size_t count = 0;
};

/// Read-only view of one parameter tensor (serialization path).
using ConstParamBlob = std::pair<const float*, size_t>;

class Layer {
 public:
  virtual ~Layer() = default;
  /// Forward pass. With record=true the input needed by backward() is kept.
  virtual Tensor4 forward(const Tensor4& x, bool record) = 0;
  /// Propagates grad_out; accumulates parameter gradients. Requires a
  /// recorded forward pass.
  virtual Tensor4 backward(const Tensor4& grad_out) = 0;
  virtual void collect_params(std::vector<ParamView>& out) {}
  virtual void collect_param_data(std::vector<ConstParamBlob>& out) const {}
  virtual void zero_grad() {}
  virtual LayerSpec spec() const = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;
};

class Conv2d final : public Layer {
 public:
  Conv2d(int in_ch, int out_ch, int kernel, int stride);

  Tensor4 forward(const Tensor4& x, bool record) override;
  Tensor4 backward(const Tensor4& grad_out) override;
  void collect_params(std::vector<ParamView>& out) override;
  void collect_param_data(std::vector<ConstParamBlob>& out) const override;
  void zero_grad() override;
  LayerSpec spec() const override { return LayerSpec::conv(in_ch_, out_ch_, k_, stride_); }
  std::unique_ptr<Layer> clone() const override;

  /// Weight layout: (out_ch, in_ch, k, k), row-major.
  std::vector<float>& weights() { return w_; }
  std::vector<float>& bias() { return b_; }
  const std::vector<float>& weight_grad() const { return gw_; }

 private:
  int in_ch_, out_ch_, k_, stride_, pad_;
  std::vector<float> w_, b_;
  std::vector<float> gw_, gb_;
  Tensor4 cached_in_;
  bool recorded_ = false;
};

class LeakyRelu final : public Layer {
 public:
  explicit LeakyRelu(float slope) : slope_(slope) {}
  Tensor4 forward(const Tensor4& x, bool record) override;
  Tensor4 backward(const Tensor4& grad_out) override;
  LayerSpec spec() const override { return LayerSpec::leaky_relu(slope_); }
  std::unique_ptr<Layer> clone() const override;

 private:
  float slope_;
  Tensor4 cached_in_;
  bool recorded_ = false;
};

class UpsampleNearest final : public Layer {
 public:
  Tensor4 forward(const Tensor4& x, bool record) override;
  Tensor4 backward(const Tensor4& grad_out) override;
  LayerSpec spec() const override { return LayerSpec::upsample(); }
  std::unique_ptr<Layer> clone() const override;

 private:
  int in_h_ = 0, in_w_ = 0, in_c_ = 0, in_n_ = 0;
  bool recorded_ = false;
};

/// Fixed feed-forward stack of layers with recorded activations for a
/// single reverse pass. Copyable; copies share nothing.
class Sequential {
 public:
  Sequential() = default;
  explicit Sequential(const std::vector<LayerSpec>& specs);
  Sequential(const Sequential& o);
  Sequential& operator=(const Sequential& o);
  Sequential(Sequential&&) = default;
  Sequential& operator=(Sequential&&) = default;

  Tensor4 forward(const Tensor4& x, bool record = false);
  Tensor4 backward(const Tensor4& grad_out);
  void collect_params(std::vector<ParamView>& out);
  void collect_param_data(std::vector<ConstParamBlob>& out) const;
  std::vector<ParamView> params();
  void zero_grad();
  /// He-uniform weight init, zero bias; draws from rng in layer order.
  void init_params(Rng& rng);
  std::vector<LayerSpec> specs() const;
  size_t layer_count() const { return layers_.size(); }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace scmc
