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

#include "opvc/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "opvc/aer_io.hpp"
#include "opvc/error.hpp"
#include "opvc/fixtures.hpp"
#include "opvc/frame_io.hpp"
#include "opvc/pipeline.hpp"
#include "opvc/rd_sweep.hpp"

namespace opvc
{
namespace
{
namespace fs = std::filesystem;
using nlohmann::json;

// Raised for invalid flag combinations detected after parsing.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct InputFlags
{
  std::string path;
  std::string fixture;
  int size = 0;
  int frames = 0;
  std::uint64_t seed = 0;
  std::size_t max_frames = 0;
  int factor = 1;

  void add(CLI::App & app, const std::string & positional = "input")
  {
    app.add_option(positional, path, "Y4M file or directory of PGM frames");
    app.add_option("--fixture", fixture, "Built-in synthetic or bundled fixture instead of a file")
      ->check(CLI::IsMember(fixtures::names()));
    app.add_option("--size", size, "Fixture side length in pixels (0 = fixture default)");
    app.add_option("--frames", frames, "Fixture frame count (0 = fixture default)");
    app.add_option("--seed", seed, "Seed for randomized fixtures");
    app.add_option("--max-frames", max_frames, "Read at most this many frames (0 = all)");
    app.add_option("--factor", factor, "Block-downsampling factor")->check(CLI::PositiveNumber);
  }

  bool given() const { return !path.empty() || !fixture.empty(); }

  Video load() const
  {
    if (path.empty() == fixture.empty()) {
      throw UsageError("give exactly one of an input path or --fixture");
    }
    const Video v = fixture.empty() ? load_video(path, Y4mOptions{max_frames})
                                    : fixtures::make(fixture, {size, frames, seed});
    return factor == 1 ? v : downsample_video(v, factor);
  }
};

std::vector<Metric> parse_metrics(const std::vector<std::string> & names)
{
  std::vector<Metric> out;
  for (const auto & n : names) {
    const auto m = parse_metric(n);
    if (!m) {
      throw UsageError("unknown metric '" + n + "'");
    }
    out.push_back(*m);
  }
  return out;
}

void write_video(const fs::path & path, const Video & v)
{
  if (path.extension() == ".y4m") {
    write_file_atomic(path, write_y4m(v));
  } else {
    write_pgm_directory(path, v);
  }
}

void write_text(const fs::path & path, const std::string & text)
{
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

json metric_json(const RunResult & r)
{
  json m = json::object();
  for (const auto & rep : r.distortion) {
    if (std::isfinite(rep.mean)) {
      m[std::string(to_string(rep.metric))] = rep.mean;
    } else {
      m[std::string(to_string(rep.metric))] = nullptr;
    }
  }
  return m;
}

json report_json(const RunResult & r, const std::string & source)
{
  json j = {
    {"source", source},
    {"method", std::string(to_string(r.method))},
    {"delta", r.delta},
    {"width", r.width},
    {"height", r.height},
    {"frames", r.frames},
    {"K", r.total_events},
    {"rate", r.rate},
    {"shift", r.shift},
    {"metrics", metric_json(r)}};
  if (!r.metric_errors.empty()) {
    j["metric_errors"] = r.metric_errors;
  }
  return j;
}

void error_json(std::ostream & err, const std::string & kind, const std::string & message)
{
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

// Values from a JSON config file fill options the command line left unset.
void apply_config(CLI::App & app, const std::string & config_path)
{
  if (config_path.empty()) {
    return;
  }
  std::ifstream in(config_path);
  if (!in) {
    throw Error("IoError", "cannot open config " + config_path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception & e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  for (const auto & [key, value] : j.items()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option * opt = nullptr;
    try {
      opt = app.get_option(key == "input" ? "input" : "--" + flag);
    } catch (const CLI::OptionNotFound &) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    if (opt->count() > 0) {
      continue;
    }
    std::vector<std::string> values;
    if (value.is_array()) {
      for (const auto & v : value) {
        values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else {
      values.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    try {
      opt->clear();
      for (const auto & v : values) {
        opt->add_result(v);
      }
      opt->run_callback();
    } catch (const CLI::Error & e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

struct Cli
{
  CLI::App app{"Event-camera video compression simulator (SAEC / OPVC)", "opvc"};

  // simulate / encode
  InputFlags sim_in;
  std::string sim_method = "saec";
  double sim_delta = 0.0;
  std::vector<std::string> sim_metrics = {"ms_ssim"};
  double epsilon = 1.0;
  double shift_floor = 1.0;
  std::string out_recon;
  std::string out_json;
  std::string config;

  InputFlags enc_in;
  std::string enc_method = "saec";
  double enc_delta = 0.0;
  double enc_epsilon = 1.0;
  double enc_shift_floor = 1.0;
  std::string enc_output;

  std::string dec_stream;
  std::string dec_output;
  InputFlags dec_ref;
  std::string dec_ref_fixture;
  std::vector<std::string> dec_metrics = {"ms_ssim"};
  std::string dec_json;

  std::string inspect_stream;

  std::string sweep_config;
  std::string sweep_out;
  unsigned jobs = 0;

  InputFlags ds_in;
  std::string ds_output;

  CLI::App * simulate = nullptr;
  CLI::App * sweep_cmd = nullptr;
  CLI::App * encode = nullptr;
  CLI::App * decode = nullptr;
  CLI::App * inspect = nullptr;
  CLI::App * downsample = nullptr;

  Cli()
  {
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", kToolVersion);
    app.get_formatter()->column_width(34);

    simulate = app.add_subcommand("simulate", "Run one SAEC or OPVC simulation and report rate and distortion");
    sim_in.add(*simulate);
    simulate->add_option("--method", sim_method, "Compression scheme")->check(CLI::IsMember({"saec", "opvc"}));
    simulate->add_option("--delta", sim_delta, "Event threshold in log-intensity units")
      ->check(CLI::PositiveNumber);
    simulate->add_option("--metrics", sim_metrics, "Distortion metrics (mse, psnr, ssim, ms_ssim)")->delimiter(',');
    simulate->add_option("--epsilon", epsilon, "Offset added before the logarithm")->check(CLI::PositiveNumber);
    simulate->add_option("--shift-floor", shift_floor, "Smallest shifted coefficient for OPVC")
      ->check(CLI::PositiveNumber);
    simulate->add_option("--out-recon", out_recon, "Write the reconstruction (.y4m file or PGM directory)");
    simulate->add_option("--out-json", out_json, "Write the JSON report to this file as well");
    simulate->add_option("--config", config, "JSON file with defaults for any of these flags");

    sweep_cmd = app.add_subcommand("sweep", "Sweep thresholds, methods and resolutions; write rd.csv, rd.svg, manifest.json");
    sweep_cmd->add_option("config", sweep_config, "Sweep configuration (JSON)")->required();
    sweep_cmd->add_option("--out-dir", sweep_out, "Output directory (overrides output_dir in the config)");
    sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = available parallelism)")->envname("OPVC_JOBS");

    encode = app.add_subcommand("encode", "Encode a video into an .aer event stream");
    enc_in.add(*encode);
    encode->add_option("--method", enc_method, "Compression scheme")->check(CLI::IsMember({"saec", "opvc"}));
    encode->add_option("--delta", enc_delta, "Event threshold in log-intensity units")
      ->required()
      ->check(CLI::PositiveNumber);
    encode->add_option("--epsilon", enc_epsilon, "Offset added before the logarithm")->check(CLI::PositiveNumber);
    encode->add_option("--shift-floor", enc_shift_floor, "Smallest shifted coefficient for OPVC")
      ->check(CLI::PositiveNumber);
    encode->add_option("-o,--output", enc_output, "Output .aer file")->required();

    decode = app.add_subcommand("decode", "Decode an .aer stream into a video, optionally scoring it");
    decode->add_option("stream", dec_stream, "Input .aer file")->required();
    decode->add_option("-o,--output", dec_output, "Reconstruction (.y4m file or PGM directory)");
    decode->add_option("--reference", dec_ref.path, "Original video to score the reconstruction against");
    decode->add_option("--reference-fixture", dec_ref.fixture, "Fixture to score against")
      ->check(CLI::IsMember(fixtures::names()));
    decode->add_option("--size", dec_ref.size, "Reference fixture side length (0 = default)");
    decode->add_option("--frames", dec_ref.frames, "Reference fixture frame count (0 = default)");
    decode->add_option("--seed", dec_ref.seed, "Reference fixture seed");
    decode->add_option("--factor", dec_ref.factor, "Downsampling applied to the reference")
      ->check(CLI::PositiveNumber);
    decode->add_option("--metrics", dec_metrics, "Distortion metrics (mse, psnr, ssim, ms_ssim)")->delimiter(',');
    decode->add_option("--out-json", dec_json, "Write the JSON report to this file");

    inspect = app.add_subcommand("inspect", "Print the header, per-transition event counts and K of an .aer stream");
    inspect->add_option("stream", inspect_stream, "Input .aer file")->required();

    downsample = app.add_subcommand("downsample", "Block-average a video to a lower resolution");
    ds_in.add(*downsample);
    downsample->add_option("-o,--output", ds_output, "Output (.y4m file or PGM directory)")->required();
  }

  int run_simulate(std::ostream & out)
  {
    apply_config(*simulate, config);
    if (!(sim_delta > 0.0)) {
      throw UsageError("--delta must be given and > 0");
    }
    const Video v = sim_in.load();
    RunOptions opt;
    opt.pipeline.log.epsilon = epsilon;
    opt.pipeline.shift_floor = shift_floor;
    opt.metrics = parse_metrics(sim_metrics);
    opt.keep_reconstruction = !out_recon.empty();
    opt.tolerate_metric_errors = true;
    const RunResult r = run_pipeline(v, *parse_method(sim_method), EventThreshold(sim_delta), opt);
    const json report = report_json(r, v.meta().source_id);
    if (!out_recon.empty()) {
      write_video(out_recon, *r.reconstruction);
    }
    if (!out_json.empty()) {
      write_text(out_json, report.dump(2) + "\n");
    }
    out << report.dump(2) << "\n";
    return kExitOk;
  }

  int run_sweep(std::ostream & out, std::ostream & err)
  {
    std::ifstream in(sweep_config);
    if (!in) {
      throw Error("IoError", "cannot open sweep config " + sweep_config);
    }
    json j;
    try {
      in >> j;
    } catch (const json::exception & e) {
      throw ConfigError(std::string("sweep config is not valid JSON: ") + e.what());
    }
    SweepConfig cfg = SweepConfig::from_json(j);
    if (!sweep_out.empty()) {
      cfg.output_dir = sweep_out;
    }
    if (cfg.output_dir.empty()) {
      throw UsageError("no output directory: pass --out-dir or set output_dir");
    }
    if (sweep_cmd->get_option("--jobs")->count() > 0 || std::getenv("OPVC_JOBS") != nullptr) {
      cfg.jobs = jobs;
    }
    // Inputs are loaded before anything is written so that a bad path leaves no outputs.
    const std::vector<Video> videos = load_inputs(cfg);
    const SweepResult result = sweep(cfg, videos);

    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    if (!result.table.empty()) {
      write_text(dir / "rd.csv", emit_csv(result.table));
      write_text(dir / "rd.svg", emit_svg_plot(result.table));
    }
    write_text(dir / "manifest.json", result.manifest(cfg).dump(2) + "\n");
    out << json{{"points", result.table.size()}, {"runs", result.runs.size()}, {"failures", result.failures.size()},
                {"output_dir", dir.string()}}
             .dump()
        << "\n";
    if (!result.failures.empty()) {
      for (const auto & f : result.failures) {
        err << json{{"video", f.video_id}, {"method", std::string(to_string(f.method))}, {"delta", f.delta},
                    {"error", f.error}}
                 .dump()
            << "\n";
      }
      return kExitPartial;
    }
    return kExitOk;
  }

  int run_encode(std::ostream & out)
  {
    const Video v = enc_in.load();
    PipelineConfig cfg;
    cfg.log.epsilon = enc_epsilon;
    cfg.shift_floor = enc_shift_floor;
    const AerStream s = opvc::encode(v, *parse_method(enc_method), EventThreshold(enc_delta), cfg);
    const auto bytes = serialize(s);
    write_file_atomic(enc_output, bytes);
    out << json{{"output", enc_output}, {"bytes", bytes.size()}, {"K", count_events(s)},
                {"rate", sampling_rate(count_events(s), s.header.width, s.header.height, s.header.frame_count)}}
             .dump()
        << "\n";
    return kExitOk;
  }

  int run_decode(std::ostream & out)
  {
    const AerStream s = deserialize(read_file(dec_stream));
    const Video recon = opvc::decode(s);
    RunResult r;
    r.method = s.header.method;
    r.delta = s.header.delta;
    r.width = s.header.width;
    r.height = s.header.height;
    r.frames = s.header.frame_count;
    r.total_events = count_events(s);
    r.rate = sampling_rate(r.total_events, r.width, r.height, r.frames);
    r.shift = s.header.shift;
    if (dec_ref.given()) {
      RunOptions opt;
      opt.metrics = parse_metrics(dec_metrics);
      opt.tolerate_metric_errors = true;
      measure(dec_ref.load(), recon, opt, r);
    }
    if (!dec_output.empty()) {
      write_video(dec_output, recon);
    }
    const json report = report_json(r, dec_stream);
    if (!dec_json.empty()) {
      write_text(dec_json, report.dump(2) + "\n");
    }
    out << report.dump(2) << "\n";
    return kExitOk;
  }

  int run_inspect(std::ostream & out)
  {
    const AerStream s = deserialize(read_file(inspect_stream));
    const auto & h = s.header;
    // every transition is listed, including those without events
    std::vector<std::pair<std::size_t, std::uint64_t>> per(h.frame_count > 0 ? h.frame_count - 1 : 0);
    for (const auto & b : s.batches) {
      auto & [pixels, k] = per.at(b.transition_index - 1);
      pixels = b.entries.size();
      for (const auto & e : b.entries) {
        k += static_cast<std::uint64_t>(std::llabs(e.count));
      }
    }
    json batches = json::array();
    for (std::size_t t = 0; t < per.size(); ++t) {
      batches.push_back({{"transition", t + 1}, {"pixels", per[t].first}, {"events", per[t].second}});
    }
    const std::uint64_t total = count_events(s);
    out << json{{"header",
                 {{"method", std::string(to_string(h.method))},
                  {"width", h.width},
                  {"height", h.height},
                  {"frame_count", h.frame_count},
                  {"fps", std::to_string(h.fps_num) + "/" + std::to_string(h.fps_den)},
                  {"delta", h.delta},
                  {"shift", h.shift},
                  {"epsilon", h.epsilon}}},
                {"transitions", batches},
                {"K", total},
                {"rate", sampling_rate(total, h.width, h.height, h.frame_count)}}
             .dump(2)
        << "\n";
    return kExitOk;
  }

  int run_downsample(std::ostream & out)
  {
    const Video v = ds_in.load();
    write_video(ds_output, v);
    out << json{{"output", ds_output}, {"width", v.meta().width}, {"height", v.meta().height},
                {"frames", v.meta().frame_count}}
             .dump()
        << "\n";
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  Cli cli;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    cli.app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << cli.app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << cli.app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion &) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    error_json(err, "UsageError", e.what());
    return kExitUsage;
  }

  try {
    if (cli.simulate->parsed()) {
      return cli.run_simulate(out);
    }
    if (cli.sweep_cmd->parsed()) {
      return cli.run_sweep(out, err);
    }
    if (cli.encode->parsed()) {
      return cli.run_encode(out);
    }
    if (cli.decode->parsed()) {
      return cli.run_decode(out);
    }
    if (cli.inspect->parsed()) {
      return cli.run_inspect(out);
    }
    if (cli.downsample->parsed()) {
      return cli.run_downsample(out);
    }
  } catch (const UsageError & e) {
    error_json(err, "UsageError", e.what());
    return kExitUsage;
  } catch (const Error & e) {
    error_json(err, e.kind(), e.what());
    return kExitFailure;
  } catch (const std::exception & e) {
    error_json(err, "Error", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace opvc
