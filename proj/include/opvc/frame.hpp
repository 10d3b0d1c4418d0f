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

#ifndef OPVC_FRAME_HPP
#define OPVC_FRAME_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace opvc
{
/// Row-major m x n plane of doubles. All arithmetic after ingestion is f64.
using Plane = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Domain : std::uint8_t { intensity, log_intensity, coefficient, shifted_coefficient };

std::string_view to_string(Domain d);

/// One video frame or coefficient plane, tagged with the domain it lives in.
/// Intensity frames are checked to be element-wise non-negative.
///
/// Log-intensity frames also remember which domain they were taken from
/// (`log_source()`), so the inverse conversion restores the right tag.
class Frame
{
public:
  Frame(Plane data, Domain domain);
  Frame(Plane data, Domain domain, Domain log_source);

  const Plane & data() const noexcept { return data_; }
  Domain domain() const noexcept { return domain_; }
  Domain log_source() const noexcept { return log_source_; }
  Eigen::Index rows() const noexcept { return data_.rows(); }
  Eigen::Index cols() const noexcept { return data_.cols(); }
  double operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  bool same_shape(const Frame & other) const noexcept
  {
    return rows() == other.rows() && cols() == other.cols();
  }

  friend bool operator==(const Frame & a, const Frame & b)
  {
    return a.domain_ == b.domain_ && a.log_source_ == b.log_source_ && a.same_shape(b) &&
           a.data_ == b.data_;
  }

private:
  Plane data_;
  Domain domain_;
  Domain log_source_;
};

struct VideoMeta
{
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t frame_count = 0;
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  std::string source_id;
  // set when the video was cropped from the top-left of a larger source
  std::uint32_t crop_source_width = 0;
  std::uint32_t crop_source_height = 0;

  friend bool operator==(const VideoMeta &, const VideoMeta &) = default;
};

/// Ordered, non-empty sequence of equally sized frames. The constructor
/// rewrites width/height/frame_count in `meta` from the frames themselves.
class Video
{
public:
  Video(VideoMeta meta, std::vector<Frame> frames);

  const VideoMeta & meta() const noexcept { return meta_; }
  const std::vector<Frame> & frames() const noexcept { return frames_; }
  const Frame & frame(std::size_t s) const { return frames_.at(s); }
  std::size_t size() const noexcept { return frames_.size(); }
  Eigen::Index rows() const noexcept { return frames_.front().rows(); }
  Eigen::Index cols() const noexcept { return frames_.front().cols(); }

  /// Throws DimensionError unless the video has at least one transition.
  void require_transitions() const;

private:
  VideoMeta meta_;
  std::vector<Frame> frames_;
};

}  // namespace opvc

#endif  // OPVC_FRAME_HPP
