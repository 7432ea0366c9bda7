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

#include "scmc/complexity.hpp"

#include <stdexcept>

namespace scmc {

namespace {

constexpr int kProbeSize = 64;  // multiple of 4, divides exactly through the stacks

double stack_macs(const std::vector<LayerSpec>& specs, int h0, int w0) {
  double macs = 0.0;
  int h = h0, w = w0;
  for (const auto& s : specs) {
    switch (s.kind) {
      case LayerKind::kConv: {
        if (h % s.stride != 0 || w % s.stride != 0)
          throw std::invalid_argument("mac_count: probe dims not stride-aligned");
        const int oh = h / s.stride;
        const int ow = w / s.stride;
        macs += static_cast<double>(s.out_ch) * s.in_ch * s.kernel * s.kernel *
                static_cast<double>(oh) * ow;
        h = oh;
        w = ow;
        break;
      }
      case LayerKind::kUpsampleNearest:
        h *= 2;
        w *= 2;
        break;
      case LayerKind::kLeakyRelu:
        break;
    }
  }
  return macs;
}

}  // namespace

MacProfile mac_count(const CodecArch& arch) {
  arch.validate();
  const double pixels = static_cast<double>(kProbeSize) * kProbeSize;
  MacProfile p;
  p.kappa_ga = stack_macs(arch.analysis, kProbeSize, kProbeSize) / pixels;
  const int lh = kProbeSize / arch.downsample;
  p.kappa_gs = stack_macs(arch.synthesis, lh, lh) / pixels;
  // One symbol evaluation = two Laplace CDF lookups at 2 MACs each; the
  // latent plane holds C / downsample^2 symbols per image pixel.
  const double symbols_per_pixel =
      static_cast<double>(arch.latent_channels) / (arch.downsample * arch.downsample);
  p.kappa_p = 4.0 * symbols_per_pixel;
  return p;
}

MacProfile reference_profile() { return {17690.0, 708.0, 725.0}; }

ComplexityReport complexity_report(const MacProfile& profile, int mode_count) {
  if (mode_count < 1) throw std::invalid_argument("complexity: mode count must be >= 1");
  ComplexityReport r;
  r.kappa_ga = profile.kappa_ga;
  r.kappa_gs = profile.kappa_gs;
  r.kappa_p = profile.kappa_p;
  r.mode_count = mode_count;
  r.kappa_enc = mode_count * (profile.kappa_ga + profile.kappa_gs + profile.kappa_p) +
                profile.kappa_ga + profile.kappa_p;
  r.kappa_dec = profile.kappa_gs + profile.kappa_p;
  return r;
}

}  // namespace scmc
