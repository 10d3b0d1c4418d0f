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

#ifndef OPVC_FIXTURES_HPP
#define OPVC_FIXTURES_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "opvc/frame.hpp"

namespace opvc::fixtures
{
/// White (255) square moving `speed` px/frame to the right on black.
/// `square` = 0 picks size / 4. The square starts at column size / 8.
Video moving_square(int size = 64, int frames = 30, int square = 0, int speed = 1);

/// Horizontal sinusoidal grating drifting by `speed` px/frame, mid-gray mean.
Video drifting_sinusoid(int size = 64, int frames = 30, double period = 16.0, double speed = 1.0);

/// Fresh uniform noise in [0, 255] every frame, from a seeded generator.
Video static_noise(int size = 64, int frames = 30, std::uint64_t seed = 0);

Video constant_video(int size = 64, int frames = 30, double value = 128.0);

/// 1x1, three frames, log track [0, 0.35, 0.05] under epsilon = 1.
Video one_pixel_track();

/// A size x size window sliding right across `image` by `speed` px/frame,
/// starting at (row_offset, 0). Mimics a camera panning over a still scene.
Video image_pan(const Frame & image, int size, int frames, int speed, int row_offset);

/// Pan over the bundled natural photograph (data/camera.pgm, 512 x 512).
Video natural_pan(
  const std::filesystem::path & image_path, int size = 256, int frames = 30, int speed = 4);

/// Default location of the bundled image data.
std::filesystem::path default_data_dir();

std::vector<std::string> names();

struct Params
{
  int size = 0;      // 0 = fixture default
  int frames = 0;    // 0 = fixture default
  std::uint64_t seed = 0;
};

/// Builds a fixture by name; throws ConfigError for unknown names.
Video make(std::string_view name, const Params & params = {});

}  // namespace opvc::fixtures

#endif  // OPVC_FIXTURES_HPP
