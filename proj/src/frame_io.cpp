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

#include "opvc/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

#include "opvc/error.hpp"

namespace opvc
{
namespace
{
constexpr std::string_view kY4mMagic = "YUV4MPEG2";
constexpr std::string_view kFrameTag = "FRAME";

bool parse_uint(std::string_view s, std::uint32_t & out)
{
  if (s.empty()) {
    return false;
  }
  const auto * end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Y4mHeader
{
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t fps_num = 0;
  std::uint32_t fps_den = 0;
  std::size_t chroma_bytes = 0;
};

std::size_t chroma_bytes_for(std::string_view colorspace, std::uint32_t w, std::uint32_t h)
{
  if (colorspace == "mono") {
    return 0;
  }
  if (colorspace == "420" || colorspace == "420jpeg" || colorspace == "420paldv" ||
      colorspace == "420mpeg2") {
    return 2 * static_cast<std::size_t>((w + 1) / 2) * ((h + 1) / 2);
  }
  // 420p10, mono16, 444p12, ...
  if (colorspace.find('p') != std::string_view::npos || colorspace == "mono16") {
    throw UnsupportedFormat("unsupported bit depth in colorspace C" + std::string(colorspace));
  }
  throw UnsupportedFormat("unsupported chroma subsampling C" + std::string(colorspace));
}

Y4mHeader parse_y4m_header(std::string_view line, std::size_t base)
{
  Y4mHeader hdr;
  std::string_view colorspace = "420jpeg";
  bool have_w = false;
  bool have_h = false;
  std::size_t pos = kY4mMagic.size();
  while (pos < line.size()) {
    if (line[pos] != ' ') {
      throw ParseError("expected space between Y4M header tokens", base + pos);
    }
    ++pos;
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    const std::string_view tok = line.substr(pos, end - pos);
    if (tok.empty()) {
      throw ParseError("empty Y4M header token", base + pos);
    }
    const std::string_view val = tok.substr(1);
    switch (tok[0]) {
      case 'W':
        if (!parse_uint(val, hdr.width) || hdr.width == 0) {
          throw ParseError("bad width token", base + pos);
        }
        have_w = true;
        break;
      case 'H':
        if (!parse_uint(val, hdr.height) || hdr.height == 0) {
          throw ParseError("bad height token", base + pos);
        }
        have_h = true;
        break;
      case 'F': {
        const auto colon = val.find(':');
        if (colon == std::string_view::npos || !parse_uint(val.substr(0, colon), hdr.fps_num) ||
            !parse_uint(val.substr(colon + 1), hdr.fps_den)) {
          throw ParseError("bad frame-rate token", base + pos);
        }
        break;
      }
      case 'C':
        colorspace = val;
        break;
      case 'I':
      case 'A':
      case 'X':
        break;
      default:
        throw ParseError("unknown Y4M header token '" + std::string(tok) + "'", base + pos);
    }
    pos = end;
  }
  if (!have_w || !have_h) {
    throw ParseError("Y4M header lacks W or H", base);
  }
  if (hdr.fps_den == 0) {
    // unknown or 0:0 rate; keep a usable default
    hdr.fps_num = 30;
    hdr.fps_den = 1;
  }
  hdr.chroma_bytes = chroma_bytes_for(colorspace, hdr.width, hdr.height);
  return hdr;
}

// Skips PGM whitespace and '#' comments.
std::size_t skip_pgm_space(std::span<const std::uint8_t> b, std::size_t pos)
{
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') {
        ++pos;
      }
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  return pos;
}

std::uint32_t read_pgm_uint(std::span<const std::uint8_t> b, std::size_t & pos)
{
  pos = skip_pgm_space(b, pos);
  const std::size_t start = pos;
  std::uint64_t v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > 0xFFFFFFFFull) {
      throw ParseError("PGM header value too large", start);
    }
    ++pos;
  }
  if (pos == start) {
    throw ParseError("expected integer in PGM header", start);
  }
  return static_cast<std::uint32_t>(v);
}

std::uint8_t to_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

void LogPolicy::validate() const
{
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("log epsilon must be a finite positive number");
  }
}

Video parse_y4m(std::span<const std::uint8_t> bytes, const Y4mOptions & options)
{
  const std::string_view text(reinterpret_cast<const char *>(bytes.data()), bytes.size());
  if (!text.starts_with(kY4mMagic)) {
    throw ParseError("missing YUV4MPEG2 signature", 0);
  }
  const std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos) {
    throw ParseError("unterminated Y4M stream header", text.size());
  }
  const Y4mHeader hdr = parse_y4m_header(text.substr(0, eol), 0);
  const std::size_t luma = static_cast<std::size_t>(hdr.width) * hdr.height;

  std::vector<Frame> frames;
  std::size_t pos = eol + 1;
  while (pos < bytes.size()) {
    if (options.max_frames != 0 && frames.size() == options.max_frames) {
      break;
    }
    const std::size_t index = frames.size();
    if (bytes.size() - pos < kFrameTag.size()) {
      throw TruncatedError(index);
    }
    if (text.substr(pos, kFrameTag.size()) != kFrameTag) {
      throw ParseError("expected FRAME tag", pos);
    }
    const std::size_t frame_eol = text.find('\n', pos);
    if (frame_eol == std::string_view::npos) {
      throw TruncatedError(index);
    }
    const std::size_t payload = frame_eol + 1;
    if (bytes.size() - payload < luma + hdr.chroma_bytes) {
      throw TruncatedError(index);
    }
    Plane y(hdr.height, hdr.width);
    std::transform(
      bytes.begin() + static_cast<std::ptrdiff_t>(payload),
      bytes.begin() + static_cast<std::ptrdiff_t>(payload + luma), y.data(),
      [](std::uint8_t v) { return static_cast<double>(v); });
    frames.emplace_back(std::move(y), Domain::intensity);
    pos = payload + luma + hdr.chroma_bytes;
  }
  VideoMeta meta;
  meta.fps_num = hdr.fps_num;
  meta.fps_den = hdr.fps_den;
  return Video(std::move(meta), std::move(frames));
}

Bytes write_y4m(const Video & video)
{
  const auto & m = video.meta();
  const std::string header = "YUV4MPEG2 W" + std::to_string(m.width) + " H" +
                             std::to_string(m.height) + " F" + std::to_string(m.fps_num) + ":" +
                             std::to_string(m.fps_den) + " Ip A1:1 Cmono\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + video.size() * (6 + m.width * static_cast<std::size_t>(m.height)));
  for (const auto & f : video.frames()) {
    out.insert(out.end(), kFrameTag.begin(), kFrameTag.end());
    out.push_back('\n');
    const Plane & d = f.data();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      out.push_back(to_u8(d.data()[i]));
    }
  }
  return out;
}

Frame decode_pgm(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("not a binary PGM (expected P5 magic)", 0);
  }
  std::size_t pos = 2;
  const std::uint32_t w = read_pgm_uint(bytes, pos);
  const std::uint32_t h = read_pgm_uint(bytes, pos);
  const std::size_t maxval_at = skip_pgm_space(bytes, pos);
  const std::uint32_t maxval = read_pgm_uint(bytes, pos);
  if (w == 0 || h == 0) {
    throw ParseError("PGM dimensions must be positive", 2);
  }
  if (maxval == 0 || maxval > 255) {
    throw UnsupportedFormat("PGM maxval " + std::to_string(maxval) + " at byte " +
                            std::to_string(maxval_at) + " (only 8-bit supported)");
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw ParseError("expected single whitespace after PGM maxval", pos);
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() - pos < n) {
    throw TruncatedError(0);
  }
  Plane p(h, w);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = bytes[pos + i];
    if (v > maxval) {
      throw ParseError("PGM sample exceeds maxval", pos + i);
    }
    p.data()[i] = v;
  }
  return Frame(std::move(p), Domain::intensity);
}

Bytes encode_pgm(const Frame & frame)
{
  const std::string header =
    "P5\n" + std::to_string(frame.cols()) + " " + std::to_string(frame.rows()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  const Plane & d = frame.data();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out.push_back(to_u8(d.data()[i]));
  }
  return out;
}

Video parse_pgm_sequence(std::span<const Bytes> payloads)
{
  std::vector<Frame> frames;
  frames.reserve(payloads.size());
  for (std::size_t s = 0; s < payloads.size(); ++s) {
    Frame f = [&] {
      try {
        return decode_pgm(payloads[s]);
      } catch (const TruncatedError &) {
        throw TruncatedError(s);
      }
    }();
    if (!frames.empty() && !f.same_shape(frames.front())) {
      throw DimensionError("PGM frame " + std::to_string(s) + " differs in size from frame 0");
    }
    frames.push_back(std::move(f));
  }
  return Video(VideoMeta{}, std::move(frames));
}

Frame block_downsample(const Frame & frame, int factor)
{
  if (factor < 1) {
    throw DimensionError("downsample factor must be positive");
  }
  if (frame.rows() % factor != 0 || frame.cols() % factor != 0) {
    throw DimensionError(
      "factor " + std::to_string(factor) + " does not divide " + std::to_string(frame.rows()) +
      "x" + std::to_string(frame.cols()));
  }
  if (factor == 1) {
    return frame;
  }
  const Eigen::Index m = frame.rows() / factor;
  const Eigen::Index n = frame.cols() / factor;
  const double inv_area = 1.0 / (static_cast<double>(factor) * factor);
  Plane out(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = frame.data().block(i * factor, j * factor, factor, factor).sum() * inv_area;
    }
  }
  return Frame(std::move(out), frame.domain(), frame.log_source());
}

Video downsample_video(const Video & video, int factor)
{
  if (factor < 1) {
    throw DimensionError("downsample factor must be positive");
  }
  const Eigen::Index m = video.rows() / factor * factor;
  const Eigen::Index n = video.cols() / factor * factor;
  if (m == 0 || n == 0) {
    throw DimensionError("downsample factor larger than the frame");
  }
  VideoMeta meta = video.meta();
  const bool crop = m != video.rows() || n != video.cols();
  if (crop) {
    meta.crop_source_width = static_cast<std::uint32_t>(video.cols());
    meta.crop_source_height = static_cast<std::uint32_t>(video.rows());
  }
  std::vector<Frame> frames;
  frames.reserve(video.size());
  for (const auto & f : video.frames()) {
    if (crop) {
      frames.push_back(block_downsample(
        Frame(f.data().topLeftCorner(m, n), f.domain(), f.log_source()), factor));
    } else {
      frames.push_back(block_downsample(f, factor));
    }
  }
  return Video(std::move(meta), std::move(frames));
}

Frame to_log_intensity(const Frame & frame, const LogPolicy & policy)
{
  policy.validate();
  if (frame.domain() != Domain::intensity && frame.domain() != Domain::shifted_coefficient) {
    throw DomainError("log conversion needs an intensity or shifted-coefficient frame, got " +
                      std::string(to_string(frame.domain())));
  }
  if ((frame.data().array() < 0.0).any()) {
    throw DomainError("cannot take the log of negative values");
  }
  Plane out = (frame.data().array() + policy.epsilon).log().matrix();
  return Frame(std::move(out), Domain::log_intensity, frame.domain());
}

Frame from_log_intensity(const Frame & frame, const LogPolicy & policy)
{
  policy.validate();
  if (frame.domain() != Domain::log_intensity) {
    throw DomainError("expected a log-intensity frame, got " + std::string(to_string(frame.domain())));
  }
  Plane out = (frame.data().array().exp() - policy.epsilon).matrix();
  if (frame.log_source() == Domain::intensity) {
    out = out.cwiseMax(0.0);
  }
  return Frame(std::move(out), frame.log_source());
}

Video to_log_video(const Video & video, const LogPolicy & policy)
{
  std::vector<Frame> frames;
  frames.reserve(video.size());
  for (const auto & f : video.frames()) {
    frames.push_back(to_log_intensity(f, policy));
  }
  return Video(video.meta(), std::move(frames));
}

Video from_log_video(const Video & video, const LogPolicy & policy)
{
  std::vector<Frame> frames;
  frames.reserve(video.size());
  for (const auto & f : video.frames()) {
    frames.push_back(from_log_intensity(f, policy));
  }
  return Video(video.meta(), std::move(frames));
}

Bytes read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("IoError", "cannot open " + path.string());
  }
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Video load_video(const std::filesystem::path & path, const Y4mOptions & options)
{
  namespace fs = std::filesystem;
  if (!fs::exists(path)) {
    throw Error("IoError", "input not found: " + path.string());
  }
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto & e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".pgm") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (options.max_frames != 0 && files.size() > options.max_frames) {
      files.resize(options.max_frames);
    }
    std::vector<Bytes> payloads;
    for (const auto & f : files) {
      payloads.push_back(read_file(f));
    }
    const Video v = parse_pgm_sequence(payloads);
    VideoMeta meta = v.meta();
    meta.source_id = path.filename().string();
    return Video(std::move(meta), v.frames());
  }
  const Bytes bytes = read_file(path);
  const Video v = path.extension() == ".pgm" ? parse_pgm_sequence(std::span(&bytes, 1))
                                             : parse_y4m(bytes, options);
  VideoMeta meta = v.meta();
  meta.source_id = path.stem().string();
  return Video(std::move(meta), v.frames());
}

void write_file_atomic(const std::filesystem::path & path, std::span<const std::uint8_t> bytes)
{
  namespace fs = std::filesystem;
  std::random_device rd;
  const fs::path tmp = path.string() + ".tmp" + std::to_string(rd() % 1000000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("IoError", "cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      fs::remove(tmp);
      throw Error("IoError", "short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void write_pgm_directory(const std::filesystem::path & dir, const Video & video)
{
  namespace fs = std::filesystem;
  std::random_device rd;
  const fs::path tmp = dir.string() + ".tmp" + std::to_string(rd() % 1000000);
  fs::create_directories(tmp);
  try {
    for (std::size_t s = 0; s < video.size(); ++s) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%05zu.pgm", s);
      const Bytes b = encode_pgm(video.frame(s));
      std::ofstream out(tmp / name, std::ios::binary);
      out.write(reinterpret_cast<const char *>(b.data()), static_cast<std::streamsize>(b.size()));
      if (!out) {
        throw Error("IoError", "short write in " + tmp.string());
      }
    }
    if (fs::exists(dir)) {
      fs::remove_all(dir);
    }
    fs::rename(tmp, dir);
  } catch (...) {
    fs::remove_all(tmp);
    throw;
  }
}

}  // namespace opvc
