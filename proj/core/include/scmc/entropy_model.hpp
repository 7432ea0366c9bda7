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

#include <array>
#include <vector>

#include "scmc/latents.hpp"

namespace scmc {

/// Fully factorized per-channel entropy model: each latent channel carries a
/// zero-mean Laplace with scale sigma_c = exp(log_scale_c), clamped to
/// [Sigma::kMin, Sigma::kMax]. Symbol mass is the Laplace CDF difference
/// over the unit bin around the symbol.
namespace Sigma {
constexpr double kMin = 1e-3;
constexpr double kMax = 1e3;
}  // namespace Sigma

/// Minimum probability assigned to any in-alphabet symbol before
/// renormalization; guarantees the range coder can represent every symbol.
constexpr double kProbFloor = 1.0 / 65536.0;

/// Scale from a log-scale parameter, clamped. If d_logsigma_dparam is given,
/// it receives 1 inside the clamp range and 0 where the clamp is active.
double sigma_from_log_scale(double log_scale, double* d_logsigma_dparam = nullptr);

/// Laplace mass of the unit bin centered at continuous value v, evaluated in
/// a form that never under/overflows for in-range sigma.
double laplace_bin_mass(double v, double sigma);

/// Probability table over the alphabet: raw bin masses floored at
/// kProbFloor, then renormalized to sum to one.
using ChannelPmf = std::array<double, kAlphabetSize>;
ChannelPmf floored_pmf(double sigma);

/// Probability of one integer symbol under the floored, renormalized model.
double symbol_probability(int symbol, double sigma);

/// Exact bit cost of a latent grid under the floored model:
/// sum over elements of -log2 p(symbol).
double rate_estimate_bits(const LatentGrid& latents, const std::vector<float>& log_scales);

/// -log2 of the unfloored bin mass at a continuous value (training path).
/// Optionally reports the derivative w.r.t. v and w.r.t. the log-scale
/// parameter (zero where the sigma clamp is active).
double continuous_rate_bits(double v, double log_scale, double* d_dv = nullptr,
                            double* d_dlog_scale = nullptr);

}  // namespace scmc
