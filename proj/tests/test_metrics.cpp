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

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "opvc/error.hpp"
#include "opvc/fixtures.hpp"
#include "opvc/frame_io.hpp"
#include "opvc/metrics.hpp"
#include "oracles.hpp"

using namespace opvc;

namespace
{
Frame img(const Plane & p) { return Frame(p, Domain::intensity); }

Frame camera(int factor)
{
  const Frame full = decode_pgm(read_file(fixtures::default_data_dir() / "camera.pgm"));
  return factor == 1 ? full : block_downsample(full, factor);
}

Plane smooth_random(std::mt19937_64 & rng, int m, int n)
{
  // noise plus a gradient so the SSIM terms are not degenerate
  Plane p = oracle::random_plane(rng, m, n, 0, 60);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      p(i, j) += 120.0 + 60.0 * std::sin(0.2 * i) * std::cos(0.15 * j);
    }
  }
  return p;
}
}  // namespace

TEST_CASE("mse and psnr examples")
{
  const Frame black(Plane::Zero(2, 2), Domain::intensity);
  const Frame white(Plane::Constant(2, 2, 255.0), Domain::intensity);
  CHECK(mse(black, white) == 65025.0);
  CHECK(psnr(black, white, 255.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psnr(white, white, 255.0) == std::numeric_limits<double>::infinity());
  CHECK(mse(white, white) == 0.0);
  CHECK_THROWS_AS(mse(black, img(Plane::Zero(2, 3))), DimensionError);
}

TEST_CASE("mse matches the loop reference")
{
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Plane a = oracle::random_plane(rng, 17, 23, 0, 255);
    const Plane b = oracle::random_plane(rng, 17, 23, 0, 255);
    const double ref = oracle::mse_loop(a, b);
    CHECK(mse(img(a), img(b)) == doctest::Approx(ref).epsilon(1e-12));
    const double c = 7.0;
    CHECK(mse(img((a.array() + c).matrix()), img(a)) == doctest::Approx(c * c).epsilon(1e-12));
  }
}

TEST_CASE("gaussian window is normalized and symmetric")
{
  const auto g = gaussian_window(11, 1.5);
  REQUIRE(g.size() == 11);
  CHECK(std::accumulate(g.begin(), g.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 5; ++i) {
    CHECK(g[i] == g[10 - i]);
  }
  CHECK(g[5] > g[4]);
}

TEST_CASE("ssim matches the direct window reference")
{
  std::mt19937_64 rng(2);
  const MetricConfig cfg;
  for (int t = 0; t < 6; ++t) {
    const Plane a = smooth_random(rng, 24, 31);
    const Plane b = (a + oracle::random_plane(rng, 24, 31, -20, 20)).cwiseMax(0.0);
    const auto ref = oracle::ssim_direct(a, b);
    CHECK(ssim(img(a), img(b), cfg) == doctest::Approx(ref.ssim).epsilon(1e-9));
  }
  const Frame x = img(smooth_random(rng, 16, 16));
  CHECK(ssim(x, x, cfg) == doctest::Approx(1.0).epsilon(1e-12));
  const Frame shifted = img((x.data().array() + 30.0).matrix());
  CHECK(ssim(x, shifted, cfg) < 1.0);
  CHECK_THROWS_AS(ssim(img(Plane::Zero(10, 40)), img(Plane::Zero(10, 40)), cfg), MetricError);
}

TEST_CASE("ms-ssim matches the direct reference")
{
  std::mt19937_64 rng(3);
  const MetricConfig cfg;
  SUBCASE("natural image at 176 px, five scales")
  {
    const Frame a = img(camera(1).data().block(100, 150, 176, 176));
    const Plane noisy = (a.data() + oracle::random_plane(rng, 176, 176, -25, 25)).cwiseMax(0.0);
    CHECK(usable_scales(176, 176, cfg) == 5);
    CHECK(ms_ssim(a, img(noisy), cfg) == doctest::Approx(oracle::ms_ssim_direct(a.data(), noisy)).epsilon(1e-9));
  }
  SUBCASE("64 px uses three scales")
  {
    const Plane a = smooth_random(rng, 64, 64);
    const Plane b = (a + oracle::random_plane(rng, 64, 64, -30, 30)).cwiseMax(0.0);
    CHECK(usable_scales(64, 64, cfg) == 3);
    CHECK(ms_ssim(img(a), img(b), cfg) == doctest::Approx(oracle::ms_ssim_direct(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("scale reduction and weights")
{
  const MetricConfig cfg;
  CHECK(usable_scales(10, 10, cfg) == 0);
  CHECK(usable_scales(11, 11, cfg) == 1);
  CHECK(usable_scales(22, 22, cfg) == 2);
  CHECK(usable_scales(44, 300, cfg) == 3);
  CHECK(usable_scales(1080, 1920, cfg) == 5);
  for (int s = 1; s <= 5; ++s) {
    const auto w = scale_weights(s, cfg);
    REQUIRE(w.size() == static_cast<std::size_t>(s));
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Frame tiny(Plane::Zero(8, 8), Domain::intensity);
  CHECK_THROWS_AS(ms_ssim(tiny, tiny, cfg), MetricError);

  // a single usable level degenerates to plain SSIM
  std::mt19937_64 rng(4);
  const Plane a = smooth_random(rng, 16, 16);
  const Plane b = (a + oracle::random_plane(rng, 16, 16, -10, 10)).cwiseMax(0.0);
  CHECK(ms_ssim(img(a), img(b), cfg) == doctest::Approx(ssim(img(a), img(b), cfg)).epsilon(1e-12));
}

TEST_CASE("metric properties")
{
  std::mt19937_64 rng(5);
  const MetricConfig cfg;
  for (int t = 0; t < 10; ++t) {
    const Plane a = smooth_random(rng, 48, 40);
    const Plane b = oracle::random_plane(rng, 48, 40, 0, 255);
    for (Metric m : {Metric::mse, Metric::psnr, Metric::ssim, Metric::ms_ssim}) {
      const double ab = evaluate(m, img(a), img(b), cfg);
      const double ba = evaluate(m, img(b), img(a), cfg);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    }
    const double s = ssim(img(a), img(b), cfg);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    const double ms = ms_ssim(img(a), img(b), cfg);
    CHECK(ms >= 0.0);
    CHECK(ms <= 1.0);
    CHECK(ms_ssim(img(a), img(a), cfg) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("video distortion averages per-frame scores")
{
  const Video v = fixtures::drifting_sinusoid(32, 4, 16.0, 1.0);
  const MetricConfig cfg;
  const DistortionReport same = video_distortion(v, v, Metric::ms_ssim, cfg);
  CHECK(same.per_frame.size() == 4);
  CHECK(same.mean == doctest::Approx(1.0).epsilon(1e-12));

  const DistortionReport inf = video_distortion(v, v, Metric::psnr, cfg);
  CHECK(inf.infinite_frames == 4);

  std::vector<Frame> frames(v.frames().begin(), v.frames().end());
  frames[1] = Frame((frames[1].data().array() + 2.0).matrix(), Domain::intensity);
  const Video w(v.meta(), frames);
  const DistortionReport r = video_distortion(v, w, Metric::mse, cfg);
  CHECK(r.per_frame[0] == 0.0);
  CHECK(r.per_frame[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.mean == doctest::Approx(1.0).epsilon(1e-12));

  const Video shorter = fixtures::drifting_sinusoid(32, 3, 16.0, 1.0);
  CHECK_THROWS_AS(video_distortion(v, shorter, Metric::mse, cfg), DimensionError);
}

TEST_CASE("metric names")
{
  CHECK(parse_metric("ms_ssim") == Metric::ms_ssim);
  CHECK(parse_metric("msssim") == Metric::ms_ssim);
  CHECK(parse_metric("psnr") == Metric::psnr);
  CHECK_FALSE(parse_metric("vmaf").has_value());
  CHECK(to_string(Metric::ssim) == "ssim");
}

TEST_CASE("published implementations agree on a quantized camera crop")
{
  // reference values from scikit-image structural_similarity (gaussian
  // weights, population covariance) and TensorFlow ssim_multiscale
  const Plane c = camera(1).data().block(100, 150, 176, 176);
  const Plane q = (c.array() / 32.0).floor() * 32.0;
  const MetricConfig cfg;
  CHECK(ssim(img(c), img(q), cfg) == doctest::Approx(0.6595596624552013).epsilon(1e-9));
  CHECK(ms_ssim(img(c), img(q), cfg) == doctest::Approx(0.9637818932533264).epsilon(1e-4));
}
