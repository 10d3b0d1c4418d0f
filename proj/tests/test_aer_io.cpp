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

#include <doctest.h>

#include <random>

#include "opvc/aer_io.hpp"
#include "opvc/error.hpp"
#include "opvc/fixtures.hpp"
#include "opvc/frame_io.hpp"

using namespace opvc;

namespace
{
AerStream one_pixel_stream()
{
  const Video v = to_log_video(fixtures::one_pixel_track(), LogPolicy{});
  return simulate(v, EventThreshold(0.1), v.frame(0));
}

AerStream random_stream(std::uint64_t seed)
{
  const Video v = to_log_video(fixtures::static_noise(12, 6, seed), LogPolicy{});
  StreamContext ctx;
  ctx.method = Method::opvc;
  ctx.shift = ShiftConstant{12.5};
  return simulate(v, EventThreshold(0.05), v.frame(0), ctx);
}
}  // namespace

TEST_CASE("round trip of small streams")
{
  const AerStream a = one_pixel_stream();
  const AerStream b = deserialize(serialize(a));
  CHECK(a == b);
  CHECK(count_events(b) == 5);

  AerStream empty;
  empty.header.width = 3;
  empty.header.height = 2;
  empty.header.frame_count = 4;
  empty.header.delta = 0.25;
  empty.initial_plane = Plane::Constant(2, 3, 1.5);
  const AerStream e2 = deserialize(serialize(empty));
  CHECK(e2 == empty);
  CHECK(count_events(e2) == 0);
}

TEST_CASE("round trip of random streams preserves every field")
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const AerStream a = random_stream(seed);
    const auto bytes = serialize(a);
    const AerStream b = deserialize(bytes);
    CHECK(a == b);
    CHECK(b.header.method == Method::opvc);
    CHECK(b.header.shift == 12.5);
    CHECK(serialize(b) == bytes);
  }
}

TEST_CASE("large counts use the escape record")
{
  AerStream s;
  s.header.width = 2;
  s.header.height = 1;
  s.header.frame_count = 2;
  s.header.delta = 1e-6;
  s.initial_plane = Plane::Zero(1, 2);
  s.batches.push_back({1, {{0, 0, 40000}, {0, 1, -2000000}}});
  const auto bytes = serialize(s);
  const AerStream back = deserialize(bytes);
  CHECK(back == s);
  CHECK(count_events(back) == 2040000);
}

TEST_CASE("corruption is detected")
{
  const AerStream a = random_stream(7);
  const auto good = serialize(a);

  SUBCASE("bad magic")
  {
    auto b = good;
    b[0] = 'X';
    try {
      deserialize(b);
      FAIL("accepted bad magic");
    } catch (const CorruptStream & e) {
      CHECK(e.offset() == 0);
    }
  }
  SUBCASE("unknown version")
  {
    auto b = good;
    b[4] = 9;
    try {
      deserialize(b);
      FAIL("accepted bad version");
    } catch (const CorruptStream & e) {
      CHECK(e.offset() == 4);
    }
  }
  SUBCASE("trailing bytes")
  {
    auto b = good;
    b.push_back(0);
    CHECK_THROWS_AS(deserialize(b), CorruptStream);
  }
  SUBCASE("every truncation")
  {
    for (std::size_t n = 0; n < good.size(); ++n) {
      CHECK_THROWS_AS(deserialize(std::span(good.data(), n)), CorruptStream);
    }
  }
  SUBCASE("every single bit flip past the version byte")
  {
    std::mt19937_64 rng(11);
    for (std::size_t i = 5; i < good.size(); ++i) {
      auto b = good;
      b[i] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      CHECK_THROWS_AS(deserialize(b), CorruptStream);
    }
  }
}
