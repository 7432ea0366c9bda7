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

#include "scmc/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace scmc {

AdamState::AdamState(const std::vector<ParamView>& params, double beta1, double beta2,
                     double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const auto& p : params) {
    m_.emplace_back(p.count, 0.0f);
    v_.emplace_back(p.count, 0.0f);
    counts_.push_back(p.count);
  }
}

void AdamState::step(const std::vector<ParamView>& params, double lr) {
  if (lr < 0.0) throw std::invalid_argument("adam: lr must be >= 0");
  if (params.size() != m_.size()) throw std::invalid_argument("adam: param group mismatch");
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (size_t s = 0; s < params.size(); ++s) {
    if (params[s].count != counts_[s])
      throw std::invalid_argument("adam: param shape mismatch");
    float* p = params[s].value;
    const float* g = params[s].grad;
    float* m = m_[s].data();
    float* v = v_[s].data();
    for (size_t i = 0; i < counts_[s]; ++i) {
      const double gi = g[i];
      const double mi = beta1_ * m[i] + (1.0 - beta1_) * gi;
      const double vi = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      if (lr > 0.0) {
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        p[i] = static_cast<float>(p[i] - lr * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }
}

double cosine_lr(int64_t step, int64_t total_steps, double base_lr) {
  if (total_steps <= 0) throw std::invalid_argument("cosine_lr: total_steps must be > 0");
  if (step < 0 || step > total_steps)
    throw std::invalid_argument("cosine_lr: step out of [0, total_steps]");
  if (step == total_steps) return 0.0;
  const double t = static_cast<double>(step) / static_cast<double>(total_steps);
  return base_lr * 0.5 * (1.0 + std::cos(M_PI * t));
}

}  // namespace scmc
