// Copyright 2026 The opvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "opvc/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "opvc/error.hpp"

namespace opvc
{
namespace
{
void require_same_shape(const Frame & a, const Frame & b)
{
  if (!a.same_shape(b)) {
    throw DimensionError("metric operands differ in size");
  }
}

// Valid-region separable filtering: output is (m - w + 1) x (n - w + 1).
Plane filter_valid(const Plane & x, const std::vector<double> & taps)
{
  const auto w = static_cast<Eigen::Index>(taps.size());
  const Eigen::Index m = x.rows() - w + 1;
  const Eigen::Index n = x.cols() - w + 1;
  Plane rows_pass = Plane::Zero(x.rows(), n);
  for (Eigen::Index k = 0; k < w; ++k) {
    rows_pass += taps[k] * x.middleCols(k, n);
  }
  Plane out = Plane::Zero(m, n);
  for (Eigen::Index k = 0; k < w; ++k) {
    out += taps[k] * rows_pass.middleRows(k, m);
  }
  return out;
}

Plane pool2(const Plane & x)
{
  const Eigen::Index m = x.rows() / 2;
  const Eigen::Index n = x.cols() / 2;
  Plane out(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = 0.25 * (x(2 * i, 2 * j) + x(2 * i, 2 * j + 1) + x(2 * i + 1, 2 * j) +
                          x(2 * i + 1, 2 * j + 1));
    }
  }
  return out;
}

struct SsimMeans
{
  double ssim;  // mean of the l * cs map
  double cs;    // mean of the contrast-structure map
};

SsimMeans ssim_means(const Plane & a, const Plane & b, const MetricConfig & cfg)
{
  const auto taps = gaussian_window(cfg.ssim_window, cfg.ssim_sigma);
  const double c1 = std::pow(cfg.k1 * cfg.dynamic_range, 2);
  const double c2 = std::pow(cfg.k2 * cfg.dynamic_range, 2);
  const Plane mu_a = filter_valid(a, taps);
  const Plane mu_b = filter_valid(b, taps);
  const Plane aa = filter_valid(a.cwiseProduct(a), taps);
  const Plane bb = filter_valid(b.cwiseProduct(b), taps);
  const Plane ab = filter_valid(a.cwiseProduct(b), taps);

  const auto ma = mu_a.array();
  const auto mb = mu_b.array();
  const auto var_a = aa.array() - ma * ma;
  const auto var_b = bb.array() - mb * mb;
  const auto cov = ab.array() - ma * mb;
  const Eigen::ArrayXXd lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
  const Eigen::ArrayXXd cs = (2.0 * cov + c2) / (var_a + var_b + c2);
  return {(lum * cs).mean(), cs.mean()};
}

}  // namespace

std::string_view to_string(Metric m)
{
  switch (m) {
    case Metric::mse:
      return "mse";
    case Metric::psnr:
      return "psnr";
    case Metric::ssim:
      return "ssim";
    case Metric::ms_ssim:
      return "ms_ssim";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view s)
{
  for (Metric m : {Metric::mse, Metric::psnr, Metric::ssim, Metric::ms_ssim}) {
    if (s == to_string(m)) {
      return m;
    }
  }
  if (s == "msssim" || s == "ms-ssim") {
    return Metric::ms_ssim;
  }
  return std::nullopt;
}

void MetricConfig::validate() const
{
  if (ssim_window < 1 || ssim_window % 2 == 0) {
    throw MetricError("SSIM window must be a positive odd integer");
  }
  if (!(ssim_sigma > 0.0) || !(dynamic_range > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) {
    throw MetricError("SSIM constants must be positive");
  }
  if (scale_count < 1 || static_cast<std::size_t>(scale_count) > msssim_weights.size()) {
    throw MetricError("MS-SSIM scale count must be between 1 and the number of weights");
  }
  for (double w : msssim_weights) {
    if (!(w >= 0.0)) {
      throw MetricError("MS-SSIM weights must be non-negative");
    }
  }
}

double mse(const Frame & a, const Frame & b)
{
  require_same_shape(a, b);
  return (a.data() - b.data()).squaredNorm() / static_cast<double>(a.data().size());
}

double psnr(const Frame & a, const Frame & b, double range)
{
  const double e = mse(a, b);
  if (e == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(range * range / e);
}

std::vector<double> gaussian_window(int size, double sigma)
{
  std::vector<double> g(static_cast<std::size_t>(size));
  const int half = size / 2;
  for (int i = 0; i < size; ++i) {
    const double x = i - half;
    g[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
  }
  const double total = std::accumulate(g.begin(), g.end(), 0.0);
  for (double & v : g) {
    v /= total;
  }
  return g;
}

double ssim(const Frame & a, const Frame & b, const MetricConfig & cfg)
{
  cfg.validate();
  require_same_shape(a, b);
  if (std::min(a.rows(), a.cols()) < cfg.ssim_window) {
    throw MetricError(
      "frame " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
      " is smaller than the SSIM window " + std::to_string(cfg.ssim_window));
  }
  return ssim_means(a.data(), b.data(), cfg).ssim;
}

int usable_scales(Eigen::Index rows, Eigen::Index cols, const MetricConfig & cfg)
{
  for (int s = cfg.scale_count; s >= 1; --s) {
    const Eigen::Index side = std::min(rows, cols) >> (s - 1);
    if (side >= cfg.ssim_window) {
      return s;
    }
  }
  return 0;
}

std::vector<double> scale_weights(int scales, const MetricConfig & cfg)
{
  std::vector<double> w(cfg.msssim_weights.begin(), cfg.msssim_weights.begin() + scales);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) {
    throw MetricError("MS-SSIM weights sum to zero");
  }
  for (double & v : w) {
    v /= total;
  }
  return w;
}

double ms_ssim(const Frame & a, const Frame & b, const MetricConfig & cfg)
{
  cfg.validate();
  require_same_shape(a, b);
  const int scales = usable_scales(a.rows(), a.cols(), cfg);
  if (scales < 1) {
    throw MetricError(
      "frame " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
      " is too small for MS-SSIM with window " + std::to_string(cfg.ssim_window));
  }
  const auto weights = scale_weights(scales, cfg);
  Plane x = a.data();
  Plane y = b.data();
  double result = 1.0;
  for (int s = 0; s < scales; ++s) {
    const SsimMeans m = ssim_means(x, y, cfg);
    const double term = s + 1 == scales ? m.ssim : m.cs;
    result *= std::pow(std::max(term, 0.0), weights[s]);
    if (s + 1 < scales) {
      x = pool2(x);
      y = pool2(y);
    }
  }
  return result;
}

double evaluate(Metric metric, const Frame & a, const Frame & b, const MetricConfig & cfg)
{
  switch (metric) {
    case Metric::mse:
      return mse(a, b);
    case Metric::psnr:
      return psnr(a, b, cfg.dynamic_range);
    case Metric::ssim:
      return ssim(a, b, cfg);
    case Metric::ms_ssim:
      return ms_ssim(a, b, cfg);
  }
  throw MetricError("unknown metric");
}

DistortionReport video_distortion(
  const Video & original, const Video & reconstructed, Metric metric, const MetricConfig & cfg)
{
  if (original.size() != reconstructed.size()) {
    throw DimensionError("videos differ in frame count");
  }
  if (original.rows() != reconstructed.rows() || original.cols() != reconstructed.cols()) {
    throw DimensionError("videos differ in frame size");
  }
  DistortionReport report;
  report.metric = metric;
  report.config = cfg;
  report.per_frame.reserve(original.size());
  double sum = 0.0;
  std::size_t finite = 0;
  for (std::size_t s = 0; s < original.size(); ++s) {
    const double v = evaluate(metric, original.frame(s), reconstructed.frame(s), cfg);
    report.per_frame.push_back(v);
    if (std::isinf(v)) {
      ++report.infinite_frames;
    } else {
      sum += v;
      ++finite;
    }
  }
  report.mean = finite > 0 ? sum / static_cast<double>(finite)
                           : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace opvc
