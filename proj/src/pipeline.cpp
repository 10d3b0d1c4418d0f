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

#include "opvc/pipeline.hpp"

#include <chrono>

#include "opvc/error.hpp"

namespace opvc
{
namespace
{
Frame clamp_intensity(const Plane & p, double clamp_max)
{
  return Frame(p.cwiseMax(0.0).cwiseMin(clamp_max), Domain::intensity);
}
}  // namespace

CameraSignal camera_signal(const Video & intensity, Method method, const PipelineConfig & cfg)
{
  cfg.log.validate();
  if (method == Method::saec) {
    return {to_log_video(intensity, cfg.log), ShiftConstant{}};
  }
  std::vector<Frame> coeffs;
  coeffs.reserve(intensity.size());
  for (const auto & f : intensity.frames()) {
    coeffs.push_back(dct2(f));
  }
  const ShiftConstant c = compute_shift(coeffs, cfg.shift_floor);
  std::vector<Frame> logs;
  logs.reserve(coeffs.size());
  for (const auto & f : coeffs) {
    logs.push_back(to_log_intensity(shift(f, c), cfg.log));
  }
  return {Video(intensity.meta(), std::move(logs)), c};
}

AerStream encode(const Video & intensity, Method method, EventThreshold delta, const PipelineConfig & cfg)
{
  intensity.require_transitions();
  const CameraSignal sig = camera_signal(intensity, method, cfg);
  const StreamContext ctx{method, sig.shift, cfg.log.epsilon};
  return simulate(sig.log_video, delta, sig.log_video.frame(0), ctx);
}

Video decode(const AerStream & stream, double clamp_max)
{
  const Video log_video = integrate(stream);
  const LogPolicy policy{stream.header.epsilon};
  const ShiftConstant c{stream.header.shift};
  std::vector<Frame> out;
  out.reserve(log_video.size());
  for (const auto & f : log_video.frames()) {
    const Frame linear = from_log_intensity(f, policy);
    if (stream.header.method == Method::opvc) {
      out.push_back(clamp_intensity(idct2(unshift(linear, c)), clamp_max));
    } else {
      out.push_back(clamp_intensity(linear.data(), clamp_max));
    }
  }
  return Video(log_video.meta(), std::move(out));
}

double sampling_rate(std::uint64_t events, std::uint32_t width, std::uint32_t height, std::uint32_t frames)
{
  const double denom = static_cast<double>(width) * height * frames;
  if (!(denom > 0.0)) {
    throw DimensionError("sampling rate of an empty video");
  }
  return static_cast<double>(events) / denom;
}

void measure(const Video & original, const Video & reconstruction, const RunOptions & options, RunResult & result)
{
  for (Metric m : options.metrics) {
    try {
      result.distortion.push_back(video_distortion(original, reconstruction, m, options.metric_config));
    } catch (const MetricError & e) {
      if (!options.tolerate_metric_errors) {
        throw;
      }
      result.metric_errors[std::string(to_string(m))] = e.what();
    }
  }
}

RunResult run_pipeline(const Video & video, Method method, EventThreshold delta, const RunOptions & options)
{
  const auto t0 = std::chrono::steady_clock::now();
  AerStream stream = encode(video, method, delta, options.pipeline);
  Video recon = decode(stream, options.pipeline.clamp_max);

  RunResult r;
  r.method = method;
  r.delta = delta.value();
  r.width = video.meta().width;
  r.height = video.meta().height;
  r.frames = video.meta().frame_count;
  r.total_events = count_events(stream);
  r.rate = sampling_rate(r.total_events, r.width, r.height, r.frames);
  r.shift = stream.header.shift;
  measure(video, recon, options, r);
  if (options.keep_reconstruction) {
    r.reconstruction = std::move(recon);
  }
  if (options.keep_stream) {
    r.stream = std::move(stream);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunResult run_saec(const Video & video, EventThreshold delta, const RunOptions & options)
{
  return run_pipeline(video, Method::saec, delta, options);
}

RunResult run_opvc(const Video & video, EventThreshold delta, const RunOptions & options)
{
  return run_pipeline(video, Method::opvc, delta, options);
}

}  // namespace opvc
