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

#include "scmc/codec.hpp"

namespace scmc {

/// Per-pixel multiply-accumulate cost of one forward pass through each
/// codec component.
struct MacProfile {
  double kappa_ga = 0.0;  // analysis transform
  double kappa_gs = 0.0;  // synthesis transform
  double kappa_p = 0.0;   // entropy model
};

/// Counts MACs layer by layer at a probe resolution where every stride
/// divides exactly, normalized per image pixel. Convolutions cost
/// out_ch * in_ch * k^2 per output location; upsampling and activations
/// cost zero. The entropy model costs 2 MACs per CDF evaluation and two
/// evaluations per latent symbol.
MacProfile mac_count(const CodecArch& arch);

/// Reference constants for published low-complexity codec components
/// (analysis 17690, synthesis 708, entropy model 725 MAC/pixel), used to
/// reproduce reported complexity figures independently of the local
/// architecture.
MacProfile reference_profile();

/// Mode-competition complexity. With M competing codecs the encoder pays
/// M full evaluations (selection) plus one re-encode through the selected
/// analysis transform and entropy model; the decoder always runs a single
/// synthesis + entropy model pass regardless of M.
struct ComplexityReport {
  double kappa_ga = 0.0;
  double kappa_gs = 0.0;
  double kappa_p = 0.0;
  int mode_count = 0;
  double kappa_enc = 0.0;  // M * (ga + gs + p) + ga + p
  double kappa_dec = 0.0;  // gs + p
};

ComplexityReport complexity_report(const MacProfile& profile, int mode_count);

}  // namespace scmc
