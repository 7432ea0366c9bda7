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

#include "scmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scmc {

double mse_image(const Image& a, const Image& b) {
  if (a.h != b.h || a.w != b.w) throw std::invalid_argument("mse: image dims differ");
  double acc = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    const double d = static_cast<double>(a.v[i]) - b.v[i];
    acc += d * d;
  }
  return a.v.empty() ? 0.0 : acc / static_cast<double>(a.v.size());
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

double psnr(const Image& reference, const Image& test) {
  return psnr_from_mse(mse_image(reference, test));
}

double CubicFit::eval(double x) const {
  const double t = x - x_center;
  return coeff[0] + t * (coeff[1] + t * (coeff[2] + t * coeff[3]));
}

double CubicFit::integral(double lo, double hi) const {
  auto anti = [this](double x) {
    const double t = x - x_center;
    return t * (coeff[0] + t * (coeff[1] / 2.0 + t * (coeff[2] / 3.0 + t * coeff[3] / 4.0)));
  };
  return anti(hi) - anti(lo);
}

namespace {

// Solves the 4x4 normal equations by Gaussian elimination with partial
// pivoting; adequate for a centered cubic basis.
std::array<double, 4> solve4(std::array<std::array<double, 5>, 4> a) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    if (std::fabs(a[col][col]) < 1e-12)
      throw std::invalid_argument("bd_rate: degenerate curve (singular fit)");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = a[i][4] / a[i][i];
  return x;
}

std::vector<RDPoint> clean_curve(const std::vector<RDPoint>& curve) {
  std::vector<RDPoint> pts;
  for (const auto& p : curve) {
    if (std::isfinite(p.rate_bpp) && std::isfinite(p.psnr_db)) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(),
            [](const RDPoint& a, const RDPoint& b) { return a.rate_bpp < b.rate_bpp; });
  if (pts.size() < 4)
    throw std::invalid_argument("bd_rate: need at least 4 finite curve points");
  for (size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].rate_bpp > pts[i - 1].rate_bpp) || !(pts[i].psnr_db > pts[i - 1].psnr_db))
      throw std::invalid_argument("bd_rate: curve must be strictly increasing in rate and PSNR");
  }
  for (const auto& p : pts) {
    if (!(p.rate_bpp > 0.0)) throw std::invalid_argument("bd_rate: rates must be > 0");
  }
  return pts;
}

}  // namespace

CubicFit fit_log_rate_curve(const std::vector<RDPoint>& curve) {
  const std::vector<RDPoint> pts = clean_curve(curve);
  CubicFit fit;
  double mean = 0.0;
  for (const auto& p : pts) mean += p.psnr_db;
  fit.x_center = mean / static_cast<double>(pts.size());

  std::array<std::array<double, 5>, 4> normal{};
  for (const auto& p : pts) {
    const double t = p.psnr_db - fit.x_center;
    const double y = std::log(p.rate_bpp);
    double powers[7];
    powers[0] = 1.0;
    for (int i = 1; i < 7; ++i) powers[i] = powers[i - 1] * t;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) normal[r][c] += powers[r + c];
      normal[r][4] += powers[r] * y;
    }
  }
  fit.coeff = solve4(normal);
  return fit;
}

double bd_rate_percent(const std::vector<RDPoint>& anchor, const std::vector<RDPoint>& test) {
  const std::vector<RDPoint> a = clean_curve(anchor);
  const std::vector<RDPoint> b = clean_curve(test);
  const double lo = std::max(a.front().psnr_db, b.front().psnr_db);
  const double hi = std::min(a.back().psnr_db, b.back().psnr_db);
  if (!(hi > lo)) throw std::invalid_argument("bd_rate: PSNR ranges do not overlap");
  const CubicFit fa = fit_log_rate_curve(a);
  const CubicFit fb = fit_log_rate_curve(b);
  const double avg_diff = (fb.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
  return (std::exp(avg_diff) - 1.0) * 100.0;
}

}  // namespace scmc
