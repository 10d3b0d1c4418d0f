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

#include "opvc/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "opvc/error.hpp"
#include "opvc/frame_io.hpp"

#ifndef OPVC_DATA_DIR
#define OPVC_DATA_DIR "data"
#endif

namespace opvc::fixtures
{
namespace
{
VideoMeta meta_for(std::string id)
{
  VideoMeta m;
  m.source_id = std::move(id);
  return m;
}

void require_positive(int size, int frames)
{
  if (size < 1 || frames < 1) {
    throw ConfigError("fixture size and frame count must be positive");
  }
}
}  // namespace

Video moving_square(int size, int frames, int square, int speed)
{
  require_positive(size, frames);
  if (square == 0) {
    square = std::max(1, size / 4);
  }
  std::vector<Frame> out;
  const int top = (size - square) / 2;
  for (int s = 0; s < frames; ++s) {
    Plane p = Plane::Zero(size, size);
    const int left = size / 8 + s * speed;
    for (int i = top; i < top + square; ++i) {
      for (int j = left; j < left + square; ++j) {
        if (i >= 0 && i < size && j >= 0 && j < size) {
          p(i, j) = 255.0;
        }
      }
    }
    out.emplace_back(std::move(p), Domain::intensity);
  }
  return Video(meta_for("moving_square"), std::move(out));
}

Video drifting_sinusoid(int size, int frames, double period, double speed)
{
  require_positive(size, frames);
  std::vector<Frame> out;
  for (int s = 0; s < frames; ++s) {
    Plane p(size, size);
    for (int j = 0; j < size; ++j) {
      const double v =
        127.5 + 100.0 * std::sin(2.0 * std::numbers::pi * (j - speed * s) / period);
      p.col(j).setConstant(v);
    }
    out.emplace_back(std::move(p), Domain::intensity);
  }
  return Video(meta_for("drifting_sinusoid"), std::move(out));
}

Video static_noise(int size, int frames, std::uint64_t seed)
{
  require_positive(size, frames);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  std::vector<Frame> out;
  for (int s = 0; s < frames; ++s) {
    Plane p(size, size);
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      p.data()[k] = dist(rng);
    }
    out.emplace_back(std::move(p), Domain::intensity);
  }
  return Video(meta_for("static_noise"), std::move(out));
}

Video constant_video(int size, int frames, double value)
{
  require_positive(size, frames);
  std::vector<Frame> out(
    static_cast<std::size_t>(frames), Frame(Plane::Constant(size, size, value), Domain::intensity));
  return Video(meta_for("constant"), std::move(out));
}

Video one_pixel_track()
{
  std::vector<Frame> out;
  for (double l : {0.0, 0.35, 0.05}) {
    out.emplace_back(Plane::Constant(1, 1, std::expm1(l)), Domain::intensity);
  }
  return Video(meta_for("one_pixel"), std::move(out));
}

Video image_pan(const Frame & image, int size, int frames, int speed, int row_offset)
{
  require_positive(size, frames);
  const Eigen::Index needed_cols = size + static_cast<Eigen::Index>(speed) * (frames - 1);
  if (row_offset < 0 || row_offset + size > image.rows() || needed_cols > image.cols()) {
    throw DimensionError("pan window leaves the source image");
  }
  std::vector<Frame> out;
  for (int s = 0; s < frames; ++s) {
    out.emplace_back(image.data().block(row_offset, s * speed, size, size), Domain::intensity);
  }
  return Video(meta_for("image_pan"), std::move(out));
}

Video natural_pan(const std::filesystem::path & image_path, int size, int frames, int speed)
{
  const Frame image = decode_pgm(read_file(image_path));
  const int row_offset = static_cast<int>(image.rows() - size) / 2;
  Video v = image_pan(image, size, frames, speed, row_offset);
  VideoMeta m = v.meta();
  m.source_id = "natural_pan";
  return Video(std::move(m), v.frames());
}

std::filesystem::path default_data_dir()
{
  if (const char * env = std::getenv("OPVC_DATA_DIR")) {
    return env;
  }
  return OPVC_DATA_DIR;
}

std::vector<std::string> names()
{
  return {"moving_square", "drifting_sinusoid", "static_noise", "constant", "one_pixel", "natural_pan"};
}

Video make(std::string_view name, const Params & params)
{
  auto pick = [](int v, int fallback) { return v > 0 ? v : fallback; };
  if (name == "moving_square") {
    const int size = pick(params.size, 64);
    // speed scales with size so that every resolution shows the same motion
    return moving_square(size, pick(params.frames, 30), 0, std::max(1, size / 64));
  }
  if (name == "drifting_sinusoid") {
    const int size = pick(params.size, 64);
    return drifting_sinusoid(size, pick(params.frames, 30), size / 4.0, size / 64.0);
  }
  if (name == "static_noise") {
    return static_noise(pick(params.size, 64), pick(params.frames, 30), params.seed);
  }
  if (name == "constant") {
    return constant_video(pick(params.size, 64), pick(params.frames, 30), 128.0);
  }
  if (name == "one_pixel") {
    return one_pixel_track();
  }
  if (name == "natural_pan") {
    const int size = pick(params.size, 256);
    return natural_pan(
      default_data_dir() / "camera.pgm", size, pick(params.frames, 30), std::max(1, size / 64));
  }
  throw ConfigError("unknown fixture '" + std::string(name) + "'");
}

}  // namespace opvc::fixtures
