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

#ifndef OPVC_AER_IO_HPP
#define OPVC_AER_IO_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "opvc/event_core.hpp"

namespace opvc
{
// .aer layout, all integers little-endian, every section followed by the
// CRC32 of its own bytes:
//
//   header  "AERS" u8 version u8 method u16 width u16 height u32 frame_count
//           u32 fps_num u32 fps_den f64 delta f64 shift f64 epsilon
//           u32 batch_count
//   plane   f64[height * width] row-major initial log plane
//   blocks  u32 transition_index u32 entry_count
//           entry_count x (u16 row u16 col i16 count [i32 count])
//
// A count outside [-32767, 32767] is written as the escape value -32768
// followed by the full i32 count.
inline constexpr std::uint8_t kAerVersion = 1;
inline constexpr std::int16_t kAerCountEscape = -32768;

std::vector<std::uint8_t> serialize(const AerStream & stream);
/// Throws CorruptStream (with the byte offset of the failing section) on bad
/// magic, unknown version, truncation, checksum mismatch or trailing bytes.
AerStream deserialize(std::span<const std::uint8_t> bytes);

}  // namespace opvc

#endif  // OPVC_AER_IO_HPP
