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

#ifndef OPVC_RD_SWEEP_HPP
#define OPVC_RD_SWEEP_HPP

#include <cstdint>
#include <nlohmann/json.hpp>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opvc/event_core.hpp"
#include "opvc/fixtures.hpp"
#include "opvc/metrics.hpp"
#include "opvc/pipeline.hpp"

namespace opvc
{
inline constexpr const char * kToolVersion = "0.1.0";

/// Unweighted mean of per-video rate and distortion, or pooled totals
/// (sum K over sum m*n*S; distortion weighted by frame count).
enum class Aggregation { mean, pooled };

struct DeltaGrid
{
  double min = 1e-3;
  double max = 1.0;
  int count = 16;

  /// `count` geometrically spaced thresholds from min to max inclusive.
  std::vector<double> values() const;
};

struct InputSpec
{
  std::string path;     // set for file inputs
  std::string fixture;  // set for built-in fixtures
  fixtures::Params params;

  std::string label() const;
};

struct SweepConfig
{
  std::vector<InputSpec> inputs;
  DeltaGrid grid;
  std::vector<double> deltas;  // explicit list overrides `grid` when non-empty
  std::vector<int> factors = {1};
  std::vector<Metric> metrics = {Metric::ms_ssim};
  std::vector<Method> methods = {Method::saec, Method::opvc};
  double shift_floor = 1.0;
  double epsilon = 1.0;
  Aggregation aggregation = Aggregation::mean;
  std::string output_dir;
  unsigned jobs = 0;  // 0 = available parallelism
  std::uint64_t seed = 0;
  std::size_t max_frames = 0;
  MetricConfig metric_config;

  std::vector<double> thresholds() const;
  /// Throws ConfigError on an unusable configuration.
  void validate() const;

  static SweepConfig from_json(const nlohmann::json & j);
  nlohmann::json to_json() const;
};

struct RDPoint
{
  Method method = Method::saec;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double delta = 0.0;
  double rate = 0.0;
  std::vector<std::pair<Metric, double>> distortion;
  std::uint32_t video_count = 0;
  std::uint64_t total_events = 0;
  double wall_time = 0.0;
  Aggregation aggregation = Aggregation::mean;

  std::optional<double> value(Metric m) const;
};

/// One (video, method, resolution, threshold) evaluation.
struct RunRecord
{
  std::string video_id;
  Method method = Method::saec;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t frames = 0;
  double delta = 0.0;
  std::uint64_t total_events = 0;
  double rate = 0.0;
  std::vector<std::pair<Metric, double>> distortion;
  double wall_seconds = 0.0;
  std::string error;  // empty on success
};

struct SweepResult
{
  std::vector<RDPoint> table;
  std::vector<RunRecord> runs;
  /// Runs that failed; their videos are excluded from the affected curve.
  std::vector<RunRecord> failures;

  nlohmann::json manifest(const SweepConfig & cfg) const;
};

/// Materializes every input (files and fixtures).
std::vector<Video> load_inputs(const SweepConfig & cfg);

/// Evaluates the full {video} x {method} x {factor} x {delta} product on a
/// bounded worker pool. Output order is (method, resolution, delta) ascending
/// and does not depend on the number of workers.
SweepResult sweep(const SweepConfig & cfg, std::span<const Video> videos);
SweepResult sweep(const SweepConfig & cfg);

/// Runs `task(i)` for i in [0, n) on up to `jobs` threads (0 = hardware).
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)> & task);

/// Points of one (method, resolution) curve in ascending delta order.
std::vector<RDPoint> curve(std::span<const RDPoint> table, Method method, std::uint32_t width, std::uint32_t height);

/// Linear interpolation of the rate at which a delta-ordered curve first
/// reaches `target` distortion. nullopt when the target lies outside the curve.
std::optional<double> rate_at_distortion(std::span<const RDPoint> curve, Metric metric, double target);

inline constexpr const char * kCsvHeader =
  "method,width,height,delta,rate_events_per_pixel_frame,metric_name,distortion,video_count,total_events";

std::string emit_csv(std::span<const RDPoint> table);
std::vector<RDPoint> parse_csv(std::string_view csv);
/// One polyline per (method, resolution); log-scaled rate on x, the first
/// metric of the table on y.
std::string emit_svg_plot(std::span<const RDPoint> table);

}  // namespace opvc

#endif  // OPVC_RD_SWEEP_HPP
