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

#include "opvc/aer_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <limits>
#include <string>

#include "opvc/error.hpp"

namespace opvc
{
namespace
{
constexpr char kMagic[4] = {'A', 'E', 'R', 'S'};

std::uint32_t crc_of(std::span<const std::uint8_t> bytes)
{
  return static_cast<std::uint32_t>(
    crc32(0L, reinterpret_cast<const Bytef *>(bytes.data()), static_cast<uInt>(bytes.size())));
}

class Writer
{
public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void i16(std::int16_t v) { put(static_cast<std::uint16_t>(v), 2); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const void * p, std::size_t n)
  {
    const auto * b = static_cast<const std::uint8_t *>(p);
    out_.insert(out_.end(), b, b + n);
  }
  // CRC32 of everything written since `start`.
  void seal(std::size_t start) { u32(crc_of(std::span(out_).subspan(start))); }
  std::size_t size() const { return out_.size(); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

private:
  void put(std::uint64_t v, int n)
  {
    for (int i = 0; i < n; ++i) {
      out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }
  std::vector<std::uint8_t> out_;
};

class Reader
{
public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int16_t i16() { return static_cast<std::int16_t>(static_cast<std::uint16_t>(get(2))); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
  double f64() { return std::bit_cast<double>(get(8)); }

  void check_crc(std::size_t start, const char * section)
  {
    const std::uint32_t expected = crc_of(b_.subspan(start, pos_ - start));
    if (u32() != expected) {
      throw CorruptStream(std::string("CRC mismatch in ") + section, start);
    }
  }
  void need(std::size_t n, std::size_t section_start) const
  {
    if (b_.size() - pos_ < n) {
      throw CorruptStream("stream truncated", section_start);
    }
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == b_.size(); }

private:
  std::uint64_t get(int n)
  {
    if (b_.size() - pos_ < static_cast<std::size_t>(n)) {
      throw CorruptStream("stream truncated", pos_);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    }
    pos_ += n;
    return v;
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const AerStream & stream)
{
  const auto & h = stream.header;
  if (stream.initial_plane.rows() != h.height || stream.initial_plane.cols() != h.width) {
    throw CorruptStream("initial plane does not match header dimensions", 0);
  }
  Writer w;
  w.raw(kMagic, 4);
  w.u8(kAerVersion);
  w.u8(static_cast<std::uint8_t>(h.method));
  w.u16(h.width);
  w.u16(h.height);
  w.u32(h.frame_count);
  w.u32(h.fps_num);
  w.u32(h.fps_den);
  w.f64(h.delta);
  w.f64(h.shift);
  w.f64(h.epsilon);
  w.u32(static_cast<std::uint32_t>(stream.batches.size()));
  w.seal(0);

  std::size_t start = w.size();
  for (Eigen::Index k = 0; k < stream.initial_plane.size(); ++k) {
    w.f64(stream.initial_plane.data()[k]);
  }
  w.seal(start);

  for (const auto & batch : stream.batches) {
    start = w.size();
    w.u32(batch.transition_index);
    w.u32(static_cast<std::uint32_t>(batch.entries.size()));
    for (const auto & ev : batch.entries) {
      w.u16(ev.row);
      w.u16(ev.col);
      if (ev.count > std::numeric_limits<std::int16_t>::max() || ev.count <= kAerCountEscape) {
        w.i16(kAerCountEscape);
        w.i32(ev.count);
      } else {
        w.i16(static_cast<std::int16_t>(ev.count));
      }
    }
    w.seal(start);
  }
  return w.take();
}

AerStream deserialize(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CorruptStream("bad magic, not an AER stream", 0);
  }
  Reader r(bytes.subspan(0));
  r.u32();  // magic
  const std::uint8_t version = r.u8();
  if (version != kAerVersion) {
    throw CorruptStream("unsupported AER version " + std::to_string(version), 4);
  }
  AerStream s;
  auto & h = s.header;
  const std::uint8_t method = r.u8();
  h.width = r.u16();
  h.height = r.u16();
  h.frame_count = r.u32();
  h.fps_num = r.u32();
  h.fps_den = r.u32();
  h.delta = r.f64();
  h.shift = r.f64();
  h.epsilon = r.f64();
  const std::uint32_t batch_count = r.u32();
  r.check_crc(0, "header");
  if (method > static_cast<std::uint8_t>(Method::opvc)) {
    throw CorruptStream("unknown method tag", 5);
  }
  h.method = static_cast<Method>(method);
  if (batch_count >= std::max<std::uint32_t>(h.frame_count, 1)) {
    throw CorruptStream("more batches than transitions", 0);
  }

  std::size_t start = r.pos();
  const std::size_t pixels = static_cast<std::size_t>(h.width) * h.height;
  r.need(pixels * 8, start);
  s.initial_plane.resize(h.height, h.width);
  for (std::size_t k = 0; k < pixels; ++k) {
    s.initial_plane.data()[k] = r.f64();
  }
  r.check_crc(start, "initial plane");

  s.batches.reserve(batch_count);
  for (std::uint32_t b = 0; b < batch_count; ++b) {
    start = r.pos();
    EventBatch batch;
    batch.transition_index = r.u32();
    const std::uint32_t entries = r.u32();
    r.need(static_cast<std::size_t>(entries) * 6, start);
    batch.entries.reserve(entries);
    for (std::uint32_t e = 0; e < entries; ++e) {
      EventEntry ev;
      ev.row = r.u16();
      ev.col = r.u16();
      const std::int16_t c = r.i16();
      ev.count = c == kAerCountEscape ? r.i32() : c;
      batch.entries.push_back(ev);
    }
    r.check_crc(start, "transition block");
    if (!s.batches.empty() && batch.transition_index <= s.batches.back().transition_index) {
      throw CorruptStream("transition blocks out of order", start);
    }
    s.batches.push_back(std::move(batch));
  }
  if (!r.done()) {
    throw CorruptStream("trailing bytes after last block", r.pos());
  }
  return s;
}

}  // namespace opvc
