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

#include <nlohmann/json.hpp>

#include "opvc/error.hpp"
#include "opvc/fixtures.hpp"
#include "opvc/rd_sweep.hpp"

using namespace opvc;

namespace
{
SweepConfig fixture_config(std::vector<std::string> names, int size, int frames)
{
  SweepConfig cfg;
  for (auto & n : names) {
    InputSpec in;
    in.fixture = n;
    in.params.size = size;
    in.params.frames = frames;
    cfg.inputs.push_back(in);
  }
  return cfg;
}

RDPoint point(double delta, double rate, double d)
{
  RDPoint p;
  p.delta = delta;
  p.rate = rate;
  p.distortion = {{Metric::ms_ssim, d}};
  return p;
}
}  // namespace

TEST_CASE("delta grid is geometric and inclusive")
{
  const auto v = DeltaGrid{}.values();
  REQUIRE(v.size() == 16);
  CHECK(v.front() == doctest::Approx(1e-3));
  CHECK(v.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < v.size(); ++i) {
    CHECK(v[i] / v[i - 1] == doctest::Approx(std::pow(1000.0, 1.0 / 15.0)));
  }
  CHECK(DeltaGrid{0.5, 0.5, 1}.values() == std::vector<double>{0.5});
}

TEST_CASE("single video, one threshold, both methods")
{
  SweepConfig cfg = fixture_config({"moving_square"}, 32, 6);
  cfg.deltas = {0.1};
  const SweepResult r = sweep(cfg);
  REQUIRE(r.table.size() == 2);
  CHECK(r.table[0].method == Method::saec);
  CHECK(r.table[1].method == Method::opvc);
  CHECK(r.runs.size() == 2);
  CHECK(r.failures.empty());
}

TEST_CASE("table cardinality over the full product")
{
  SweepConfig cfg = fixture_config({"moving_square", "drifting_sinusoid", "static_noise"}, 64, 6);
  cfg.grid = {0.01, 1.0, 8};
  cfg.factors = {1, 2};
  cfg.metrics = {Metric::ms_ssim, Metric::psnr};
  const SweepResult r = sweep(cfg);
  CHECK(r.runs.size() == 96);
  CHECK(r.table.size() == 32);
  for (const auto & p : r.table) {
    CHECK(p.video_count == 3);
    CHECK(p.distortion.size() == 2);
  }
  const std::string csv = emit_csv(r.table);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 64);
  CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
}

TEST_CASE("saec rate is non-increasing in delta")
{
  SweepConfig cfg = fixture_config({"moving_square", "drifting_sinusoid", "static_noise"}, 32, 8);
  cfg.methods = {Method::saec};
  const SweepResult r = sweep(cfg);
  for (std::size_t i = 1; i < r.table.size(); ++i) {
    CHECK(r.table[i].delta > r.table[i - 1].delta);
    CHECK(r.table[i].rate <= r.table[i - 1].rate);
  }
}

TEST_CASE("aggregation modes")
{
  SweepConfig cfg = fixture_config({"moving_square", "static_noise"}, 32, 6);
  cfg.deltas = {0.05};
  cfg.methods = {Method::saec};
  cfg.inputs[1].params.frames = 10;
  const SweepResult mean = sweep(cfg);
  cfg.aggregation = Aggregation::pooled;
  const SweepResult pooled = sweep(cfg);
  REQUIRE(mean.runs.size() == 2);
  const auto & a = mean.runs[0];
  const auto & b = mean.runs[1];
  CHECK(mean.table[0].rate == doctest::Approx((a.rate + b.rate) / 2));
  const double pf = 32.0 * 32.0 * (a.frames + b.frames);
  CHECK(pooled.table[0].rate == doctest::Approx((a.total_events + b.total_events) / pf));
  CHECK(pooled.table[0].distortion[0].second ==
        doctest::Approx((a.distortion[0].second * a.frames + b.distortion[0].second * b.frames) / (a.frames + b.frames)));
}

TEST_CASE("failing videos leave their curve and are reported")
{
  SweepConfig cfg = fixture_config({"moving_square", "moving_square"}, 32, 6);
  cfg.inputs[1].params.size = 8;  // below the SSIM window
  cfg.deltas = {0.1, 0.2};
  const SweepResult r = sweep(cfg);
  CHECK(r.failures.size() == 4);
  CHECK(r.table.size() == 4);
  for (const auto & p : r.table) {
    CHECK(p.width == 32);
  }
  const auto m = r.manifest(cfg);
  CHECK(m["failures"].size() == 4);
  CHECK(m["runs"].size() == 8);
  CHECK(m["tool"] == "opvc");
}

TEST_CASE("csv round trip and svg")
{
  SweepConfig cfg = fixture_config({"drifting_sinusoid"}, 32, 6);
  cfg.grid = {0.01, 0.5, 5};
  cfg.metrics = {Metric::ms_ssim, Metric::mse};
  const SweepResult r = sweep(cfg);
  const std::vector<RDPoint> back = parse_csv(emit_csv(r.table));
  REQUIRE(back.size() == r.table.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].method == r.table[i].method);
    CHECK(back[i].delta == r.table[i].delta);
    CHECK(back[i].rate == r.table[i].rate);
    CHECK(back[i].total_events == r.table[i].total_events);
    REQUIRE(back[i].distortion.size() == 2);
    CHECK(back[i].distortion[1].second == doctest::Approx(r.table[i].distortion[1].second).epsilon(1e-12));
  }
  const std::string svg = emit_svg_plot(r.table);
  std::size_t lines = 0;
  for (std::size_t at = svg.find("<polyline"); at != std::string::npos; at = svg.find("<polyline", at + 1)) {
    ++lines;
  }
  CHECK(lines == 2);
  CHECK(svg.find("SAEC 32x32") != std::string::npos);
  CHECK_THROWS_AS(emit_csv({}), EmptyTableError);
  CHECK_THROWS_AS(emit_svg_plot({}), EmptyTableError);
  CHECK_THROWS_AS(parse_csv("nope\n"), ParseError);
}

TEST_CASE("results do not depend on the worker count")
{
  SweepConfig cfg = fixture_config({"moving_square", "static_noise"}, 32, 6);
  cfg.grid = {0.01, 1.0, 6};
  cfg.jobs = 1;
  const std::string one = emit_csv(sweep(cfg).table);
  cfg.jobs = 4;
  CHECK(emit_csv(sweep(cfg).table) == one);
}

TEST_CASE("parallel_for covers every index once")
{
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 7) throw ConfigError("boom");
  }), ConfigError);
}

TEST_CASE("config parsing")
{
  const auto j = nlohmann::json::parse(R"({
    "inputs": ["fixture:moving_square", {"fixture": "static_noise", "size": 16, "frames": 4, "seed": 3}],
    "delta": {"min": 0.01, "max": 0.1, "count": 3},
    "factors": [1, 2],
    "metrics": ["ms_ssim", "psnr"],
    "methods": ["opvc"],
    "aggregation": "pooled",
    "jobs": 2
  })");
  const SweepConfig cfg = SweepConfig::from_json(j);
  CHECK(cfg.inputs.size() == 2);
  CHECK(cfg.inputs[1].params.size == 16);
  CHECK(cfg.thresholds().size() == 3);
  CHECK(cfg.methods == std::vector<Method>{Method::opvc});
  CHECK(cfg.aggregation == Aggregation::pooled);
  const SweepConfig again = SweepConfig::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());

  CHECK_THROWS_AS(SweepConfig::from_json(nlohmann::json::parse(R"({"inputs": ["fixture:constant"], "colour": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(SweepConfig::from_json(nlohmann::json::parse(R"({"inputs": []})")), ConfigError);
  CHECK_THROWS_AS(
    SweepConfig::from_json(nlohmann::json::parse(R"({"inputs": ["fixture:constant"], "deltas": [0.1, -1]})")),
    ConfigError);
  CHECK_THROWS_AS(
    SweepConfig::from_json(nlohmann::json::parse(R"({"inputs": ["fixture:constant"], "metrics": ["vmaf"]})")),
    ConfigError);
  CHECK_THROWS_AS(
    SweepConfig::from_json(nlohmann::json::parse(R"({"inputs": ["fixture:constant"], "factors": [0]})")),
    ConfigError);
}

TEST_CASE("rate at matched distortion")
{
  const std::vector<RDPoint> c = {point(0.01, 0.5, 0.99), point(0.1, 0.2, 0.95), point(1.0, 0.01, 0.6)};
  CHECK(*rate_at_distortion(c, Metric::ms_ssim, 0.95) == doctest::Approx(0.2));
  CHECK(*rate_at_distortion(c, Metric::ms_ssim, 0.97) == doctest::Approx(0.35));
  CHECK(*rate_at_distortion(c, Metric::ms_ssim, 0.9) == doctest::Approx(0.2 - 0.19 * (0.05 / 0.35)));
  CHECK_FALSE(rate_at_distortion(c, Metric::ms_ssim, 0.999).has_value());
  CHECK_FALSE(rate_at_distortion(c, Metric::ms_ssim, 0.5).has_value());
  CHECK_FALSE(rate_at_distortion(c, Metric::psnr, 30.0).has_value());
}
