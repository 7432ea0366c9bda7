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

#include "scmc/image.hpp"

namespace scmc {

/// One operating point of a rate-distortion curve.
struct RDPoint {
  double rate_bpp = 0.0;
  double psnr_db = 0.0;
};

/// MSE over all three channels jointly, pixels in [0, 1].
double mse_image(const Image& a, const Image& b);

/// -10 log10(MSE); +infinity for a lossless pair (callers report it as a
/// sentinel and exclude it from curve fitting).
double psnr_from_mse(double mse);
double psnr(const Image& reference, const Image& test);

/// Cubic polynomial in (x - x_center), fitted by least squares.
struct CubicFit {
  double x_center = 0.0;
  std::array<double, 4> coeff{};  // c0 + c1 t + c2 t^2 + c3 t^3, t = x - x_center

  double eval(double x) const;
  /// Closed-form antiderivative evaluated between bounds.
  double integral(double lo, double hi) const;
};

/// Least-squares cubic fit of log(rate) as a function of PSNR. Requires
/// >= 4 finite points with strictly increasing rate and PSNR.
CubicFit fit_log_rate_curve(const std::vector<RDPoint>& curve);

/// Classic BD-rate: both curves are fitted with fit_log_rate_curve, the
/// log-rate difference is averaged over the overlapping PSNR interval, and
/// the result is reported in percent (negative: `test` saves rate vs
/// `anchor`). Non-finite points are dropped before fitting; throws when the
/// PSNR ranges do not overlap.
double bd_rate_percent(const std::vector<RDPoint>& anchor, const std::vector<RDPoint>& test);

}  // namespace scmc
