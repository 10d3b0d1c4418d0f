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

#include "opvc/event_core.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "opvc/error.hpp"

namespace opvc
{
namespace
{
constexpr Eigen::Index kMaxSide = std::numeric_limits<std::uint16_t>::max();

Domain log_source_for(Method m)
{
  return m == Method::opvc ? Domain::shifted_coefficient : Domain::intensity;
}

void require_log(const Frame & f, const char * what)
{
  if (f.domain() != Domain::log_intensity) {
    throw DomainError(std::string(what) + " must be a log-intensity frame");
  }
}
}  // namespace

EventThreshold::EventThreshold(double delta) : delta_(delta)
{
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("event threshold must be finite and > 0");
  }
}

std::string_view to_string(Method m) { return m == Method::opvc ? "opvc" : "saec"; }

std::optional<Method> parse_method(std::string_view s)
{
  if (s == "saec" || s == "SAEC") {
    return Method::saec;
  }
  if (s == "opvc" || s == "OPVC") {
    return Method::opvc;
  }
  return std::nullopt;
}

CountPlane event_function(const Frame & current, const Frame & recon_prev, EventThreshold delta)
{
  if (!current.same_shape(recon_prev)) {
    throw DimensionError("event_function: frame sizes differ");
  }
  const double d = delta.value();
  Plane q = ((current.data() - recon_prev.data()).array() / d)
              .unaryExpr([](double v) { return std::trunc(v); })
              .matrix();
  // The quotient can round onto the wrong side of an integer and leave a
  // residual of exactly delta. Step such pixels once more, evaluating the
  // update with the same expression the integrator uses.
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    const double cur = current.data().data()[k];
    const double prev = recon_prev.data().data()[k];
    double & e = q.data()[k];
    while (e != 0.0 && std::abs(cur - (prev + d * e)) >= d) {
      e += cur > prev ? 1.0 : -1.0;
    }
  }
  if (q.cwiseAbs().maxCoeff() > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
    throw DomainError("per-pixel event count overflows 32 bits; threshold too small");
  }
  return q.cast<std::int32_t>();
}

EventCamera::EventCamera(const Frame & initial_log, EventThreshold delta)
: delta_(delta), recon_(initial_log)
{
  require_log(initial_log, "initial frame");
  if (initial_log.rows() > kMaxSide || initial_log.cols() > kMaxSide) {
    throw DimensionError("frames larger than 65535 pixels per side are not addressable");
  }
}

EventBatch EventCamera::step(const Frame & next_log)
{
  require_log(next_log, "camera input");
  const CountPlane e = event_function(next_log, recon_, delta_);
  ++transitions_;

  EventBatch batch;
  batch.transition_index = transitions_;
  const Eigen::Index n = e.cols();
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    if (const std::int32_t c = e.data()[k]; c != 0) {
      batch.entries.push_back(
        {static_cast<std::uint16_t>(k / n), static_cast<std::uint16_t>(k % n), c});
    }
  }
  // Only touched pixels are updated; the decoder applies the identical
  // expression per entry, which keeps both sides bit-identical.
  Plane next = recon_.data();
  for (const auto & ev : batch.entries) {
    double & v = next(ev.row, ev.col);
    v = v + delta_.value() * static_cast<double>(ev.count);
  }
  recon_ = Frame(std::move(next), Domain::log_intensity, recon_.log_source());
  return batch;
}

AerStream simulate(
  const Video & log_video, EventThreshold delta, const Frame & initial, const StreamContext & context)
{
  log_video.require_transitions();
  if (!initial.same_shape(log_video.frame(0))) {
    throw DimensionError("initial plane does not match the video size");
  }
  AerStream stream;
  const auto & m = log_video.meta();
  stream.header.width = static_cast<std::uint16_t>(m.width);
  stream.header.height = static_cast<std::uint16_t>(m.height);
  stream.header.frame_count = m.frame_count;
  stream.header.fps_num = m.fps_num;
  stream.header.fps_den = m.fps_den;
  stream.header.method = context.method;
  stream.header.delta = delta.value();
  stream.header.shift = context.shift.value;
  stream.header.epsilon = context.epsilon;
  stream.initial_plane = initial.data();

  EventCamera camera(initial, delta);
  for (std::size_t s = 1; s < log_video.size(); ++s) {
    EventBatch batch = camera.step(log_video.frame(s));
    if (!batch.entries.empty()) {
      stream.batches.push_back(std::move(batch));
    }
  }
  return stream;
}

Video integrate(const AerStream & stream)
{
  const auto & h = stream.header;
  if (stream.initial_plane.rows() != h.height || stream.initial_plane.cols() != h.width ||
      h.width == 0 || h.height == 0) {
    throw CorruptStream("initial plane does not match header dimensions", 0);
  }
  if (h.frame_count < 1) {
    throw CorruptStream("stream declares no frames", 0);
  }
  if (!(h.delta > 0.0) || !std::isfinite(h.delta)) {
    throw CorruptStream("stream threshold is not positive", 0);
  }
  const Domain source = log_source_for(h.method);
  std::vector<Frame> frames;
  frames.reserve(h.frame_count);
  Plane recon = stream.initial_plane;
  frames.emplace_back(recon, Domain::log_intensity, source);

  std::vector<std::uint8_t> seen(static_cast<std::size_t>(h.width) * h.height, 0);
  std::uint32_t next_s = 1;
  for (const auto & batch : stream.batches) {
    if (batch.transition_index < next_s || batch.transition_index >= h.frame_count) {
      throw CorruptStream(
        "batch transition index " + std::to_string(batch.transition_index) + " out of order or range", 0);
    }
    for (; next_s < batch.transition_index; ++next_s) {
      frames.emplace_back(recon, Domain::log_intensity, source);
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (const auto & ev : batch.entries) {
      if (ev.row >= h.height || ev.col >= h.width) {
        throw CorruptStream("event address outside the sensor", 0);
      }
      auto & mark = seen[static_cast<std::size_t>(ev.row) * h.width + ev.col];
      if (mark != 0) {
        throw CorruptStream("duplicate pixel within one batch", 0);
      }
      mark = 1;
      double & v = recon(ev.row, ev.col);
      v = v + h.delta * static_cast<double>(ev.count);
    }
    frames.emplace_back(recon, Domain::log_intensity, source);
    ++next_s;
  }
  for (; next_s < h.frame_count; ++next_s) {
    frames.emplace_back(recon, Domain::log_intensity, source);
  }
  VideoMeta meta;
  meta.fps_num = h.fps_num;
  meta.fps_den = h.fps_den;
  return Video(std::move(meta), std::move(frames));
}

std::uint64_t count_events(const AerStream & stream)
{
  std::uint64_t k = 0;
  for (const auto & batch : stream.batches) {
    for (const auto & ev : batch.entries) {
      k += static_cast<std::uint64_t>(std::llabs(ev.count));
    }
  }
  return k;
}

}  // namespace opvc
