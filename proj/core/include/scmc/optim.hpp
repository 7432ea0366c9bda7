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

#include "scmc/layers.hpp"

namespace scmc {

/// Adam with bias correction. Moment buffers mirror the parameter views
/// they were constructed from; the step counter increases by one per call.
class AdamState {
 public:
  AdamState(const std::vector<ParamView>& params, double beta1 = 0.9,
            double beta2 = 0.999, double eps = 1e-8);

  /// One update over the same views the state was built from. lr must be
  /// >= 0; lr == 0 advances the moments but leaves parameters unchanged.
  void step(const std::vector<ParamView>& params, double lr);

  int64_t step_count() const { return step_; }

 private:
  std::vector<std::vector<float>> m_, v_;
  std::vector<size_t> counts_;
  int64_t step_ = 0;
  double beta1_, beta2_, eps_;
};

/// Half-cosine decay: base_lr at step 0, zero at step == total_steps.
/// Requires 0 <= step <= total_steps and total_steps > 0.
double cosine_lr(int64_t step, int64_t total_steps, double base_lr);

}  // namespace scmc
