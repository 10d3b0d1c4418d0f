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

#include "opvc/frame.hpp"

#include "opvc/error.hpp"

namespace opvc
{
std::string_view to_string(Domain d)
{
  switch (d) {
    case Domain::intensity:
      return "intensity";
    case Domain::log_intensity:
      return "log_intensity";
    case Domain::coefficient:
      return "coefficient";
    case Domain::shifted_coefficient:
      return "shifted_coefficient";
  }
  return "unknown";
}

Frame::Frame(Plane data, Domain domain) : Frame(std::move(data), domain, domain) {}

Frame::Frame(Plane data, Domain domain, Domain log_source)
: data_(std::move(data)), domain_(domain), log_source_(log_source)
{
  if (data_.size() == 0) {
    throw DimensionError("frame must have at least one pixel");
  }
  if (domain_ == Domain::intensity && (data_.array() < 0.0).any()) {
    throw DomainError("intensity frame has negative elements");
  }
}

Video::Video(VideoMeta meta, std::vector<Frame> frames) : meta_(std::move(meta)), frames_(std::move(frames))
{
  if (frames_.empty()) {
    throw DimensionError("video must contain at least one frame");
  }
  for (const auto & f : frames_) {
    if (!f.same_shape(frames_.front())) {
      throw DimensionError("video frames differ in size");
    }
  }
  if (meta_.fps_den == 0) {
    throw DimensionError("fps denominator must be >= 1");
  }
  meta_.width = static_cast<std::uint32_t>(frames_.front().cols());
  meta_.height = static_cast<std::uint32_t>(frames_.front().rows());
  meta_.frame_count = static_cast<std::uint32_t>(frames_.size());
}

void Video::require_transitions() const
{
  if (frames_.size() < 2) {
    throw DimensionError("video needs at least two frames, got " + std::to_string(frames_.size()));
  }
}

}  // namespace opvc
