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

#ifndef OPVC_FRAME_IO_HPP
#define OPVC_FRAME_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "opvc/frame.hpp"

namespace opvc
{
using Bytes = std::vector<std::uint8_t>;

/// Offset added before the logarithm so that black maps to a finite value.
struct LogPolicy
{
  double epsilon = 1.0;

  /// Throws DomainError unless epsilon > 0.
  void validate() const;
};

struct Y4mOptions
{
  /// Stop after this many frames; 0 reads the whole file.
  std::size_t max_frames = 0;
};

/// Decodes the luma plane of every frame of an 8-bit 4:2:0 or mono YUV4MPEG2
/// stream. Chroma payload is skipped.
Video parse_y4m(std::span<const std::uint8_t> bytes, const Y4mOptions & options = {});

/// Writes an 8-bit `Cmono` stream. Samples are rounded and clamped to [0, 255].
Bytes write_y4m(const Video & video);

/// Binary (P5) PGM with maxval <= 255. Sample values are kept as-is.
Frame decode_pgm(std::span<const std::uint8_t> bytes);
Bytes encode_pgm(const Frame & frame);
Video parse_pgm_sequence(std::span<const Bytes> payloads);

/// Averages non-overlapping factor x factor blocks. The factor must divide
/// both dimensions; nothing is padded.
Frame block_downsample(const Frame & frame, int factor);

/// Crops to the top-left multiple of `factor` (recorded in the metadata when
/// it happens), then block-downsamples every frame.
Video downsample_video(const Video & video, int factor);

/// L = ln(I + epsilon). Accepts intensity and shifted-coefficient frames.
Frame to_log_intensity(const Frame & frame, const LogPolicy & policy);
/// I = exp(L) - epsilon, clamped at zero when the source was an intensity frame.
Frame from_log_intensity(const Frame & frame, const LogPolicy & policy);

Video to_log_video(const Video & video, const LogPolicy & policy);
Video from_log_video(const Video & video, const LogPolicy & policy);

/// `.y4m` file, or a directory of `.pgm` files taken in filename order.
Video load_video(const std::filesystem::path & path, const Y4mOptions & options = {});

Bytes read_file(const std::filesystem::path & path);
/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path & path, std::span<const std::uint8_t> bytes);
/// Writes frame_00000.pgm, ... into a fresh directory, renamed into place at the end.
void write_pgm_directory(const std::filesystem::path & dir, const Video & video);

}  // namespace opvc

#endif  // OPVC_FRAME_IO_HPP
