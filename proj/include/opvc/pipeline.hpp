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

#ifndef OPVC_PIPELINE_HPP
#define OPVC_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opvc/event_core.hpp"
#include "opvc/frame_io.hpp"
#include "opvc/metrics.hpp"
#include "opvc/transform.hpp"

namespace opvc
{
struct PipelineConfig
{
  LogPolicy log;
  /// Smallest value a shifted coefficient may take.
  double shift_floor = 1.0;
  /// Reconstructions are clamped to [0, clamp_max] before measurement.
  double clamp_max = 255.0;
};

/// The log-intensity video the event camera senses for a method, plus the
/// per-video shift (zero for SAEC).
struct CameraSignal
{
  Video log_video;
  ShiftConstant shift;
};

CameraSignal camera_signal(const Video & intensity, Method method, const PipelineConfig & cfg);

/// Encoder: intensity video in, AER stream out.
AerStream encode(const Video & intensity, Method method, EventThreshold delta, const PipelineConfig & cfg);

/// Decoder: uses nothing but the stream. Returns clamped intensity frames.
Video decode(const AerStream & stream, double clamp_max = 255.0);

/// Events per pixel per frame, K / (m * n * S).
double sampling_rate(std::uint64_t events, std::uint32_t width, std::uint32_t height, std::uint32_t frames);

struct RunOptions
{
  PipelineConfig pipeline;
  std::vector<Metric> metrics = {Metric::ms_ssim};
  MetricConfig metric_config;
  bool keep_reconstruction = false;
  bool keep_stream = false;
  /// Record metric failures (e.g. frames smaller than the SSIM window) in
  /// `metric_errors` instead of throwing.
  bool tolerate_metric_errors = false;
};

struct RunResult
{
  Method method = Method::saec;
  double delta = 0.0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t frames = 0;
  std::uint64_t total_events = 0;
  double rate = 0.0;
  double shift = 0.0;
  std::vector<DistortionReport> distortion;
  std::map<std::string, std::string> metric_errors;
  std::optional<Video> reconstruction;
  std::optional<AerStream> stream;
  double wall_seconds = 0.0;
};

/// encode -> decode -> metrics against the original.
RunResult run_pipeline(const Video & video, Method method, EventThreshold delta, const RunOptions & options);
RunResult run_saec(const Video & video, EventThreshold delta, const RunOptions & options);
RunResult run_opvc(const Video & video, EventThreshold delta, const RunOptions & options);

/// Metrics of an already decoded reconstruction, shared by the in-memory and
/// file-based paths.
void measure(const Video & original, const Video & reconstruction, const RunOptions & options, RunResult & result);

}  // namespace opvc

#endif  // OPVC_PIPELINE_HPP
