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

#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "opvc/aer_io.hpp"
#include "opvc/cli.hpp"
#include "opvc/fixtures.hpp"
#include "opvc/frame_io.hpp"
#include "opvc/pipeline.hpp"
#include "opvc/rd_sweep.hpp"

#include <unistd.h>

using namespace opvc;
namespace fs = std::filesystem;

namespace
{
struct Outcome
{
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir
{
  fs::path path;
  TempDir()
  {
    path = fs::temp_directory_path() / ("opvc_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int & counter()
  {
    static int c = 0;
    return c;
  }
  std::string operator/(const std::string & name) const { return (path / name).string(); }
};

std::string slurp(const fs::path & p)
{
  const Bytes b = read_file(p);
  return std::string(b.begin(), b.end());
}
}  // namespace

TEST_CASE("simulate reports K and rate")
{
  const Outcome o = cli({"simulate", "--fixture", "one_pixel", "--delta", "0.1", "--metrics", "mse"});
  REQUIRE(o.code == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["K"] == 5);
  CHECK(j["rate"].get<double>() == doctest::Approx(5.0 / 3.0));
  CHECK(j["method"] == "saec");
}

TEST_CASE("simulate opvc on a constant video")
{
  const Outcome o = cli({"simulate", "--fixture", "constant", "--size", "32", "--frames", "5", "--method", "opvc",
                         "--delta", "0.05", "--metrics", "ms_ssim,psnr"});
  REQUIRE(o.code == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["K"] == 0);
  CHECK(j["metrics"]["ms_ssim"].get<double>() == doctest::Approx(1.0));
  CHECK(j["shift"].get<double>() > 0.0);
}

TEST_CASE("usage errors exit 2 with a JSON message")
{
  for (const auto & args : std::vector<std::vector<std::string>>{
         {"simulate", "--fixture", "one_pixel", "--delta", "0"},
         {"simulate", "--fixture", "one_pixel", "--delta", "-1"},
         {"simulate", "--fixture", "one_pixel", "--delta", "0.1", "--method", "jpeg"},
         {"encode", "--fixture", "one_pixel", "--delta", "0.1"},
         {"frobnicate"},
       }) {
    const Outcome o = cli(args);
    CHECK(o.code == kExitUsage);
    const auto j = nlohmann::json::parse(o.err);
    CHECK(j.contains("error"));
    CHECK(j.contains("message"));
  }
}

TEST_CASE("library errors exit 1")
{
  TempDir t;
  const Outcome o = cli({"simulate", t / "missing.y4m", "--delta", "0.1"});
  CHECK(o.code == kExitFailure);
  CHECK(nlohmann::json::parse(o.err).contains("error"));
}

TEST_CASE("encode, inspect and decode")
{
  TempDir t;
  const std::string aer = t / "a.aer";
  REQUIRE(cli({"encode", "--fixture", "moving_square", "--size", "32", "--frames", "8", "--method", "opvc", "--delta",
               "0.05", "-o", aer})
            .code == kExitOk);

  const Outcome ins = cli({"inspect", aer});
  REQUIRE(ins.code == kExitOk);
  const auto info = nlohmann::json::parse(ins.out);
  CHECK(info["header"]["method"] == "opvc");
  CHECK(info["header"]["frame_count"] == 8);

  const Outcome dec = cli({"decode", aer, "-o", t / "r.y4m", "--reference-fixture", "moving_square", "--size", "32",
                           "--frames", "8", "--metrics", "ms_ssim,mse"});
  REQUIRE(dec.code == kExitOk);
  const auto dj = nlohmann::json::parse(dec.out);
  CHECK(dj["K"] == info["K"]);

  // the file path gives the same numbers as the in-memory pipeline
  RunOptions opt;
  opt.metrics = {Metric::ms_ssim, Metric::mse};
  const RunResult mem =
    run_opvc(fixtures::make("moving_square", {32, 8, 0}), EventThreshold(0.05), opt);
  CHECK(dj["K"].get<std::uint64_t>() == mem.total_events);
  CHECK(dj["metrics"]["ms_ssim"].get<double>() == mem.distortion[0].mean);
  CHECK(dj["metrics"]["mse"].get<double>() == mem.distortion[1].mean);

  const Video r = load_video(t / "r.y4m");
  CHECK(r.size() == 8);
  CHECK(r.cols() == 32);
}

TEST_CASE("empty stream decodes to the first frame")
{
  TempDir t;
  const std::string aer = t / "c.aer";
  REQUIRE(cli({"encode", "--fixture", "constant", "--size", "16", "--frames", "4", "--delta", "0.1", "-o", aer}).code ==
          kExitOk);
  const auto info = nlohmann::json::parse(cli({"inspect", aer}).out);
  CHECK(info["K"] == 0);
  CHECK(info["transitions"].size() == 3);
  CHECK(info["transitions"][0]["events"] == 0);
  CHECK(cli({"decode", aer, "-o", t / "c.y4m"}).code == kExitOk);
}

TEST_CASE("damaged streams are rejected")
{
  TempDir t;
  const std::string aer = t / "a.aer";
  REQUIRE(cli({"encode", "--fixture", "one_pixel", "--delta", "0.1", "-o", aer}).code == kExitOk);
  Bytes b = read_file(aer);
  b.resize(b.size() - 3);
  write_file_atomic(t / "cut.aer", b);
  const Outcome o = cli({"inspect", t / "cut.aer"});
  CHECK(o.code == kExitFailure);
  CHECK(nlohmann::json::parse(o.err)["error"] == "CorruptStream");
  CHECK(cli({"decode", t / "cut.aer", "-o", t / "x.y4m"}).code == kExitFailure);
  CHECK_FALSE(fs::exists(t / "x.y4m"));
}

TEST_CASE("sweep writes a reproducible table")
{
  TempDir t;
  const std::string cfg = t / "cfg.json";
  const std::string text = R"({"inputs": ["fixture:moving_square", {"fixture": "drifting_sinusoid", "size": 32, "frames": 6}],
    "delta": {"min": 0.01, "max": 0.5, "count": 4}, "factors": [1, 4], "metrics": ["ms_ssim", "psnr"]})";
  write_file_atomic(cfg, Bytes(text.begin(), text.end()));
  // the 32 px sinusoid drops below the SSIM window at factor 4

  REQUIRE(cli({"sweep", cfg, "--out-dir", t / "a", "--jobs", "1"}).code == kExitPartial);
  REQUIRE(cli({"sweep", cfg, "--out-dir", t / "b", "--jobs", "3"}).code == kExitPartial);
  for (const char * f : {"rd.csv", "rd.svg", "manifest.json"}) {
    CHECK(fs::exists(t.path / "a" / f));
  }
  CHECK(slurp(t.path / "a" / "rd.csv") == slurp(t.path / "b" / "rd.csv"));
  CHECK(slurp(t.path / "a" / "rd.svg") == slurp(t.path / "b" / "rd.svg"));
  const auto m = nlohmann::json::parse(slurp(t.path / "a" / "manifest.json"));
  CHECK(m["version"] == kToolVersion);
  CHECK(m["failures"].size() > 0);
}

TEST_CASE("sweep with a clean config exits 0")
{
  TempDir t;
  const std::string cfg = t / "cfg.json";
  const std::string text = R"({"inputs": ["fixture:static_noise"], "deltas": [0.05, 0.2], "methods": ["saec"]})";
  write_file_atomic(cfg, Bytes(text.begin(), text.end()));
  CHECK(cli({"sweep", cfg, "--out-dir", t / "o"}).code == kExitOk);
  const std::string csv = slurp(t.path / "o" / "rd.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("sweep with a missing input writes nothing")
{
  TempDir t;
  const std::string cfg = t / "cfg.json";
  const std::string text = R"({"inputs": ["fixture:constant", ")" + (t / "nope.y4m") + R"("], "deltas": [0.1]})";
  write_file_atomic(cfg, Bytes(text.begin(), text.end()));
  const Outcome o = cli({"sweep", cfg, "--out-dir", t / "out"});
  CHECK(o.code == kExitFailure);
  CHECK_FALSE(fs::exists(t.path / "out" / "rd.csv"));
  CHECK_FALSE(fs::exists(t.path / "out" / "manifest.json"));
}

TEST_CASE("downsample writes a smaller video")
{
  TempDir t;
  REQUIRE(cli({"simulate", "--fixture", "moving_square", "--delta", "0.1", "--out-recon", t / "r.y4m"}).code ==
          kExitOk);
  REQUIRE(cli({"downsample", t / "r.y4m", "--factor", "4", "-o", t / "d.y4m"}).code == kExitOk);
  const Video d = load_video(t / "d.y4m");
  CHECK(d.cols() == 16);
  CHECK(d.rows() == 16);
}

TEST_CASE("help text is stable")
{
  const fs::path dir = fs::path(OPVC_TEST_DATA_DIR) / "help";
  CHECK(cli({"--help"}).out == slurp(dir / "opvc.txt"));
  for (const char * s : {"simulate", "sweep", "encode", "decode", "inspect", "downsample"}) {
    CAPTURE(s);
    const Outcome o = cli({s, "--help"});
    CHECK(o.code == kExitOk);
    CHECK(o.out == slurp(dir / (std::string(s) + ".txt")));
  }
}
