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

#include "scmc/entropy_model.hpp"

#include <cmath>
#include <stdexcept>

namespace scmc {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double sigma_from_log_scale(double log_scale, double* d_logsigma_dparam) {
  double sigma = std::exp(log_scale);
  double pass = 1.0;
  if (sigma < Sigma::kMin) {
    sigma = Sigma::kMin;
    pass = 0.0;
  } else if (sigma > Sigma::kMax) {
    sigma = Sigma::kMax;
    pass = 0.0;
  }
  if (d_logsigma_dparam) *d_logsigma_dparam = pass;
  return sigma;
}

double laplace_bin_mass(double v, double sigma) {
  const double av = std::fabs(v);
  if (av >= 0.5) {
    // Both bin edges on the same side of zero:
    //   p = 0.5 * exp(-(|v|-0.5)/sigma) * (1 - exp(-1/sigma))
    const double b = (av - 0.5) / sigma;
    return 0.5 * std::exp(-b) * (-std::expm1(-1.0 / sigma));
  }
  // Bin straddles zero: p = 1 - 0.5 e^{-(0.5+v)/sigma} - 0.5 e^{-(0.5-v)/sigma}
  const double a = (0.5 + v) / sigma;
  const double b = (0.5 - v) / sigma;
  return 1.0 - 0.5 * std::exp(-a) - 0.5 * std::exp(-b);
}

ChannelPmf floored_pmf(double sigma) {
  ChannelPmf pmf{};
  double sum = 0.0;
  for (int s = kAlphabetMin; s <= kAlphabetMax; ++s) {
    double p = laplace_bin_mass(static_cast<double>(s), sigma);
    if (p < kProbFloor) p = kProbFloor;
    pmf[s - kAlphabetMin] = p;
    sum += p;
  }
  for (double& p : pmf) p /= sum;
  return pmf;
}

double symbol_probability(int symbol, double sigma) {
  if (symbol < kAlphabetMin || symbol > kAlphabetMax)
    throw std::invalid_argument("symbol_probability: symbol outside alphabet");
  return floored_pmf(sigma)[symbol - kAlphabetMin];
}

double rate_estimate_bits(const LatentGrid& latents, const std::vector<float>& log_scales) {
  if (static_cast<int>(log_scales.size()) != latents.c)
    throw std::invalid_argument("rate_estimate_bits: one log-scale per channel required");
  double bits = 0.0;
  const size_t plane = static_cast<size_t>(latents.h) * latents.w;
  for (int ic = 0; ic < latents.c; ++ic) {
    const double sigma = sigma_from_log_scale(log_scales[ic]);
    const ChannelPmf pmf = floored_pmf(sigma);
    std::array<double, kAlphabetSize> nll{};
    for (int s = 0; s < kAlphabetSize; ++s) nll[s] = -std::log2(pmf[s]);
    const int16_t* p = latents.v.data() + static_cast<size_t>(ic) * plane;
    for (size_t i = 0; i < plane; ++i) {
      bits += nll[p[i] - kAlphabetMin];
    }
  }
  return bits;
}

double continuous_rate_bits(double v, double log_scale, double* d_dv,
                            double* d_dlog_scale) {
  double pass;
  const double sigma = sigma_from_log_scale(log_scale, &pass);
  const double av = std::fabs(v);
  double bits, dlnp_dv, dlnp_dlnsigma;
  if (av >= 0.5) {
    const double b = (av - 0.5) / sigma;
    const double q = std::exp(-1.0 / sigma);
    // ln p = ln 0.5 - b + ln(1 - q)
    const double lnp = std::log(0.5) - b + std::log1p(-q);
    bits = -lnp / kLn2;
    const double sign = v >= 0.0 ? 1.0 : -1.0;
    dlnp_dv = -sign / sigma;
    dlnp_dlnsigma = b - q / ((1.0 - q) * sigma);
  } else {
    const double a = (0.5 + v) / sigma;
    const double b = (0.5 - v) / sigma;
    const double ea = std::exp(-a);
    const double eb = std::exp(-b);
    const double p = 1.0 - 0.5 * ea - 0.5 * eb;
    bits = -std::log2(p);
    dlnp_dv = (0.5 * ea - 0.5 * eb) / (sigma * p);
    dlnp_dlnsigma = -(0.5 * ea * a + 0.5 * eb * b) / p;
  }
  if (d_dv) *d_dv = -dlnp_dv / kLn2;
  if (d_dlog_scale) *d_dlog_scale = -dlnp_dlnsigma / kLn2 * pass;
  return bits;
}

}  // namespace scmc
