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

#ifndef OPVC_EVENT_CORE_HPP
#define OPVC_EVENT_CORE_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "opvc/frame.hpp"
#include "opvc/transform.hpp"

namespace opvc
{
/// Symmetric log-intensity contrast threshold.
class EventThreshold
{
public:
  /// Throws DomainError unless delta is finite and > 0.
  explicit EventThreshold(double delta);
  double value() const noexcept { return delta_; }

private:
  double delta_;
};

/// What the event camera looked at: the scene itself, or its shifted cosine
/// transform.
enum class Method : std::uint8_t { saec = 0, opvc = 1 };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

using CountPlane = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Signed number of same-polarity events one pixel fired during a transition.
struct EventEntry
{
  std::uint16_t row = 0;
  std::uint16_t col = 0;
  std::int32_t count = 0;
  friend bool operator==(const EventEntry &, const EventEntry &) = default;
};

/// All events between frame s-1 and frame s, in row-major pixel order.
struct EventBatch
{
  std::uint32_t transition_index = 0;
  std::vector<EventEntry> entries;
  friend bool operator==(const EventBatch &, const EventBatch &) = default;
};

struct StreamHeader
{
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint32_t frame_count = 0;
  std::uint32_t fps_num = 30;
  std::uint32_t fps_den = 1;
  Method method = Method::saec;
  double delta = 0.0;
  double shift = 0.0;
  double epsilon = 1.0;
  friend bool operator==(const StreamHeader &, const StreamHeader &) = default;
};

/// The compressed representation: header, the decoder's reference log plane
/// L(0), and one sparse batch per transition that produced events.
struct AerStream
{
  StreamHeader header;
  Plane initial_plane;
  std::vector<EventBatch> batches;

  friend bool operator==(const AerStream & a, const AerStream & b)
  {
    return a.header == b.header && a.initial_plane.rows() == b.initial_plane.rows() &&
           a.initial_plane.cols() == b.initial_plane.cols() &&
           a.initial_plane == b.initial_plane && a.batches == b.batches;
  }
};

/// E = trunc((current - recon_prev) / delta), element-wise.
CountPlane event_function(const Frame & current, const Frame & recon_prev, EventThreshold delta);

/// Stateful idealized event camera over log-intensity frames. Each call to
/// `step` advances one frame, emits the sparse batch and updates the running
/// reconstruction by delta * E.
class EventCamera
{
public:
  EventCamera(const Frame & initial_log, EventThreshold delta);

  EventBatch step(const Frame & next_log);
  const Frame & reconstruction() const noexcept { return recon_; }
  std::uint32_t transitions() const noexcept { return transitions_; }

private:
  EventThreshold delta_;
  Frame recon_;
  std::uint32_t transitions_ = 0;
};

/// Fields of the stream header that the camera itself does not determine.
struct StreamContext
{
  Method method = Method::saec;
  ShiftConstant shift{};
  double epsilon = 1.0;
};

/// Runs the camera over a whole log video starting from `initial` (which must
/// be frame 0 for the ideal-decoder setting). Transitions without events are
/// left out of the batch list.
AerStream simulate(
  const Video & log_video, EventThreshold delta, const Frame & initial, const StreamContext & context = {});

/// Decoder side: rebuilds every log frame from the stream alone. The result is
/// bit-identical to the encoder's running reconstruction.
Video integrate(const AerStream & stream);

/// Total number of individual events, sum of |count| over all entries.
std::uint64_t count_events(const AerStream & stream);

}  // namespace opvc

#endif  // OPVC_EVENT_CORE_HPP
