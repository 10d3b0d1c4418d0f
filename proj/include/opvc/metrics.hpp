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

#ifndef OPVC_METRICS_HPP
#define OPVC_METRICS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "opvc/frame.hpp"

namespace opvc
{
enum class Metric { mse, psnr, ssim, ms_ssim };

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view s);

/// SSIM / MS-SSIM parameters. Defaults are the usual 11-tap Gaussian window
/// (sigma 1.5), K1 = 0.01, K2 = 0.03 and the five-scale MS-SSIM weights.
struct MetricConfig
{
  double dynamic_range = 255.0;
  int ssim_window = 11;
  double ssim_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  std::vector<double> msssim_weights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  int scale_count = 5;

  /// Throws MetricError for even/non-positive windows, bad constants or weights.
  void validate() const;
};

double mse(const Frame & a, const Frame & b);
/// +infinity for identical frames.
double psnr(const Frame & a, const Frame & b, double range);

/// Normalized 1D Gaussian taps of the SSIM window.
std::vector<double> gaussian_window(int size, double sigma);

/// Mean of the local SSIM map over the valid region (stride 1).
double ssim(const Frame & a, const Frame & b, const MetricConfig & cfg);

/// Number of scales actually usable for an m x n frame: the largest count
/// <= cfg.scale_count whose coarsest 2x2-pooled level still fits the window.
/// 0 when even the full-resolution frame is smaller than the window.
int usable_scales(Eigen::Index rows, Eigen::Index cols, const MetricConfig & cfg);

/// Weights of the first `scales` levels, renormalized to sum to 1.
std::vector<double> scale_weights(int scales, const MetricConfig & cfg);

/// Multi-scale SSIM with 2x2 mean pooling between scales. Contrast-structure
/// and luminance terms are clamped at zero before the weighted powers, so the
/// result lies in [0, 1].
double ms_ssim(const Frame & a, const Frame & b, const MetricConfig & cfg);

double evaluate(Metric metric, const Frame & a, const Frame & b, const MetricConfig & cfg);

struct DistortionReport
{
  Metric metric = Metric::ms_ssim;
  std::vector<double> per_frame;
  double mean = 0.0;
  /// PSNR frames reported as +infinity and left out of `mean`.
  std::size_t infinite_frames = 0;
  MetricConfig config;
};

/// Mean per-frame metric between two videos of equal length and size.
DistortionReport video_distortion(
  const Video & original, const Video & reconstructed, Metric metric, const MetricConfig & cfg);

}  // namespace opvc

#endif  // OPVC_METRICS_HPP
