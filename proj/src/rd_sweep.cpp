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

#include "opvc/rd_sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "opvc/error.hpp"
#include "opvc/frame_io.hpp"

namespace opvc
{
namespace
{
std::string fmt_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view to_string(Aggregation a) { return a == Aggregation::pooled ? "pooled" : "mean"; }

template <class T>
T get_or(const nlohmann::json & j, const char * key, T fallback)
{
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void reject_unknown(const nlohmann::json & j, std::initializer_list<std::string_view> known, const char * where)
{
  for (const auto & [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

InputSpec input_from_json(const nlohmann::json & j)
{
  InputSpec in;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.starts_with("fixture:")) {
      in.fixture = s.substr(8);
    } else {
      in.path = s;
    }
    return in;
  }
  if (!j.is_object()) {
    throw ConfigError("inputs must be strings or objects");
  }
  reject_unknown(j, {"path", "fixture", "size", "frames", "seed"}, "input");
  in.path = get_or<std::string>(j, "path", "");
  in.fixture = get_or<std::string>(j, "fixture", "");
  in.params.size = get_or<int>(j, "size", 0);
  in.params.frames = get_or<int>(j, "frames", 0);
  in.params.seed = get_or<std::uint64_t>(j, "seed", 0);
  if (in.path.empty() == in.fixture.empty()) {
    throw ConfigError("each input needs exactly one of 'path' or 'fixture'");
  }
  return in;
}

// Sort key: method, resolution (pixel count, then width), delta.
auto point_key(const RDPoint & p)
{
  return std::make_tuple(
    static_cast<int>(p.method), static_cast<std::uint64_t>(p.width) * p.height, p.width, p.delta);
}

struct Task
{
  std::size_t video;
  std::size_t factor;
  Method method;
  std::size_t delta;
};

}  // namespace

std::vector<double> DeltaGrid::values() const
{
  std::vector<double> out;
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  const double lo = std::log(min);
  const double hi = std::log(max);
  for (int k = 0; k < count; ++k) {
    out.push_back(k + 1 == count ? max : std::exp(lo + (hi - lo) * k / (count - 1)));
  }
  out.front() = min;
  return out;
}

std::string InputSpec::label() const { return path.empty() ? "fixture:" + fixture : path; }

std::vector<double> SweepConfig::thresholds() const
{
  std::vector<double> d = deltas.empty() ? grid.values() : deltas;
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

void SweepConfig::validate() const
{
  if (deltas.empty()) {
    if (!(grid.min > 0.0) || !(grid.max >= grid.min) || grid.count < 1) {
      throw ConfigError("delta grid needs 0 < min <= max and count >= 1");
    }
  }
  for (double d : deltas) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ConfigError("every delta must be finite and > 0");
    }
  }
  if (factors.empty() || std::any_of(factors.begin(), factors.end(), [](int f) { return f < 1; })) {
    throw ConfigError("downsample factors must be positive integers");
  }
  if (metrics.empty() || methods.empty()) {
    throw ConfigError("sweep needs at least one metric and one method");
  }
  if (!(epsilon > 0.0)) {
    throw ConfigError("epsilon must be > 0");
  }
  if (!(shift_floor > 0.0)) {
    throw ConfigError("shift_floor must be > 0");
  }
  try {
    metric_config.validate();
  } catch (const MetricError & e) {
    throw ConfigError(e.what());
  }
}

SweepConfig SweepConfig::from_json(const nlohmann::json & j)
{
  if (!j.is_object()) {
    throw ConfigError("sweep config must be a JSON object");
  }
  reject_unknown(
    j,
    {"inputs", "delta", "deltas", "factors", "metrics", "methods", "shift_floor", "epsilon",
     "aggregation", "output_dir", "jobs", "seed", "max_frames", "metric_config"},
    "sweep config");
  SweepConfig c;
  try {
    if (!j.contains("inputs") || !j.at("inputs").is_array()) {
      throw ConfigError("'inputs' must be an array");
    }
    for (const auto & in : j.at("inputs")) {
      c.inputs.push_back(input_from_json(in));
    }
    if (j.contains("delta")) {
      const auto & d = j.at("delta");
      reject_unknown(d, {"min", "max", "count"}, "delta");
      c.grid.min = get_or<double>(d, "min", c.grid.min);
      c.grid.max = get_or<double>(d, "max", c.grid.max);
      c.grid.count = get_or<int>(d, "count", c.grid.count);
    }
    c.deltas = get_or<std::vector<double>>(j, "deltas", {});
    c.factors = get_or<std::vector<int>>(j, "factors", c.factors);
    if (j.contains("metrics")) {
      c.metrics.clear();
      for (const auto & s : j.at("metrics").get<std::vector<std::string>>()) {
        const auto m = parse_metric(s);
        if (!m) {
          throw ConfigError("unknown metric '" + s + "'");
        }
        c.metrics.push_back(*m);
      }
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto & s : j.at("methods").get<std::vector<std::string>>()) {
        const auto m = parse_method(s);
        if (!m) {
          throw ConfigError("unknown method '" + s + "'");
        }
        c.methods.push_back(*m);
      }
    }
    c.shift_floor = get_or<double>(j, "shift_floor", c.shift_floor);
    c.epsilon = get_or<double>(j, "epsilon", c.epsilon);
    const auto agg = get_or<std::string>(j, "aggregation", "mean");
    if (agg != "mean" && agg != "pooled") {
      throw ConfigError("aggregation must be 'mean' or 'pooled'");
    }
    c.aggregation = agg == "pooled" ? Aggregation::pooled : Aggregation::mean;
    c.output_dir = get_or<std::string>(j, "output_dir", "");
    c.jobs = get_or<unsigned>(j, "jobs", 0);
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.max_frames = get_or<std::size_t>(j, "max_frames", 0);
    if (j.contains("metric_config")) {
      const auto & m = j.at("metric_config");
      reject_unknown(
        m, {"dynamic_range", "ssim_window", "ssim_sigma", "k1", "k2", "msssim_weights", "scale_count"},
        "metric_config");
      MetricConfig & mc = c.metric_config;
      mc.dynamic_range = get_or<double>(m, "dynamic_range", mc.dynamic_range);
      mc.ssim_window = get_or<int>(m, "ssim_window", mc.ssim_window);
      mc.ssim_sigma = get_or<double>(m, "ssim_sigma", mc.ssim_sigma);
      mc.k1 = get_or<double>(m, "k1", mc.k1);
      mc.k2 = get_or<double>(m, "k2", mc.k2);
      mc.msssim_weights = get_or<std::vector<double>>(m, "msssim_weights", mc.msssim_weights);
      mc.scale_count = get_or<int>(m, "scale_count", mc.scale_count);
    }
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError(std::string("malformed sweep config: ") + e.what());
  }
  for (auto & in : c.inputs) {
    if (!in.fixture.empty() && in.params.seed == 0) {
      in.params.seed = c.seed;
    }
  }
  if (c.inputs.empty()) {
    throw ConfigError("sweep needs at least one input");
  }
  c.validate();
  return c;
}

nlohmann::json SweepConfig::to_json() const
{
  nlohmann::json j;
  j["inputs"] = nlohmann::json::array();
  for (const auto & in : inputs) {
    if (in.path.empty()) {
      j["inputs"].push_back(
        {{"fixture", in.fixture}, {"size", in.params.size}, {"frames", in.params.frames}, {"seed", in.params.seed}});
    } else {
      j["inputs"].push_back({{"path", in.path}});
    }
  }
  j["delta"] = {{"min", grid.min}, {"max", grid.max}, {"count", grid.count}};
  j["deltas"] = thresholds();
  j["factors"] = factors;
  j["metrics"] = nlohmann::json::array();
  for (Metric m : metrics) {
    j["metrics"].push_back(std::string(opvc::to_string(m)));
  }
  j["methods"] = nlohmann::json::array();
  for (Method m : methods) {
    j["methods"].push_back(std::string(opvc::to_string(m)));
  }
  j["shift_floor"] = shift_floor;
  j["epsilon"] = epsilon;
  j["aggregation"] = std::string(to_string(aggregation));
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  j["max_frames"] = max_frames;
  j["metric_config"] = {
    {"dynamic_range", metric_config.dynamic_range}, {"ssim_window", metric_config.ssim_window},
    {"ssim_sigma", metric_config.ssim_sigma},       {"k1", metric_config.k1},
    {"k2", metric_config.k2},                       {"msssim_weights", metric_config.msssim_weights},
    {"scale_count", metric_config.scale_count}};
  return j;
}

std::optional<double> RDPoint::value(Metric m) const
{
  for (const auto & [metric, v] : distortion) {
    if (metric == m) {
      return v;
    }
  }
  return std::nullopt;
}

std::vector<Video> load_inputs(const SweepConfig & cfg)
{
  std::vector<Video> videos;
  for (const auto & in : cfg.inputs) {
    if (!in.fixture.empty()) {
      videos.push_back(fixtures::make(in.fixture, in.params));
    } else {
      videos.push_back(load_video(in.path, Y4mOptions{cfg.max_frames}));
    }
  }
  return videos;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)> & task)
{
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) {
              first_error = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

SweepResult sweep(const SweepConfig & cfg, std::span<const Video> videos)
{
  cfg.validate();
  if (videos.empty()) {
    throw ConfigError("sweep needs at least one video");
  }
  const std::vector<double> deltas = cfg.thresholds();

  // Downsampled copies are shared read-only by all tasks of a (video, factor).
  std::vector<std::optional<Video>> scaled(videos.size() * cfg.factors.size());
  std::vector<std::string> scale_errors(scaled.size());
  parallel_for(scaled.size(), cfg.jobs, [&](std::size_t k) {
    try {
      scaled[k] = downsample_video(videos[k / cfg.factors.size()], cfg.factors[k % cfg.factors.size()]);
    } catch (const std::exception & e) {
      scale_errors[k] = e.what();
    }
  });

  std::vector<Task> tasks;
  for (std::size_t v = 0; v < videos.size(); ++v) {
    for (std::size_t f = 0; f < cfg.factors.size(); ++f) {
      for (Method m : cfg.methods) {
        for (std::size_t d = 0; d < deltas.size(); ++d) {
          tasks.push_back({v, f, m, d});
        }
      }
    }
  }

  RunOptions options;
  options.pipeline.log.epsilon = cfg.epsilon;
  options.pipeline.shift_floor = cfg.shift_floor;
  options.pipeline.clamp_max = cfg.metric_config.dynamic_range;
  options.metrics = cfg.metrics;
  options.metric_config = cfg.metric_config;

  std::vector<RunRecord> records(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t t) {
    const Task & task = tasks[t];
    const std::size_t k = task.video * cfg.factors.size() + task.factor;
    RunRecord & rec = records[t];
    const Video & source = videos[task.video];
    if (!source.meta().source_id.empty()) {
      rec.video_id = source.meta().source_id;
    } else if (task.video < cfg.inputs.size()) {
      rec.video_id = cfg.inputs[task.video].label();
    } else {
      rec.video_id = "video" + std::to_string(task.video);
    }
    rec.method = task.method;
    rec.delta = deltas[task.delta];
    if (!scaled[k]) {
      rec.error = scale_errors[k];
      return;
    }
    const Video & v = *scaled[k];
    rec.width = v.meta().width;
    rec.height = v.meta().height;
    rec.frames = v.meta().frame_count;
    try {
      const RunResult r = run_pipeline(v, task.method, EventThreshold(rec.delta), options);
      rec.total_events = r.total_events;
      rec.rate = r.rate;
      rec.wall_seconds = r.wall_seconds;
      for (const auto & rep : r.distortion) {
        rec.distortion.emplace_back(rep.metric, rep.mean);
      }
    } catch (const std::exception & e) {
      rec.error = e.what();
    }
  });

  SweepResult result;
  // A video failing anywhere on a (method, factor) curve leaves that curve.
  std::set<std::tuple<std::size_t, std::size_t, int>> dropped;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!records[t].error.empty()) {
      dropped.insert({tasks[t].video, tasks[t].factor, static_cast<int>(tasks[t].method)});
      result.failures.push_back(records[t]);
    }
  }

  struct Accum
  {
    std::vector<const RunRecord *> runs;
  };
  std::map<std::tuple<int, std::uint32_t, std::uint32_t, std::size_t>, Accum> groups;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const Task & task = tasks[t];
    if (dropped.count({task.video, task.factor, static_cast<int>(task.method)}) != 0) {
      continue;
    }
    const RunRecord & rec = records[t];
    groups[{static_cast<int>(task.method), rec.width, rec.height, task.delta}].runs.push_back(&rec);
  }

  for (const auto & [key, acc] : groups) {
    RDPoint p;
    p.method = static_cast<Method>(std::get<0>(key));
    p.width = std::get<1>(key);
    p.height = std::get<2>(key);
    p.delta = deltas[std::get<3>(key)];
    p.aggregation = cfg.aggregation;
    p.video_count = static_cast<std::uint32_t>(acc.runs.size());
    double rate_sum = 0.0;
    double pixel_frames = 0.0;
    double frames = 0.0;
    for (const RunRecord * r : acc.runs) {
      p.total_events += r->total_events;
      p.wall_time += r->wall_seconds;
      rate_sum += r->rate;
      pixel_frames += static_cast<double>(r->width) * r->height * r->frames;
      frames += r->frames;
    }
    p.rate = cfg.aggregation == Aggregation::mean ? rate_sum / p.video_count
                                                  : static_cast<double>(p.total_events) / pixel_frames;
    for (std::size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
      double sum = 0.0;
      for (const RunRecord * r : acc.runs) {
        const double v = r->distortion.at(mi).second;
        sum += cfg.aggregation == Aggregation::mean ? v : v * r->frames;
      }
      const double denom = cfg.aggregation == Aggregation::mean ? p.video_count : frames;
      p.distortion.emplace_back(cfg.metrics[mi], sum / denom);
    }
    result.table.push_back(std::move(p));
  }
  std::sort(result.table.begin(), result.table.end(), [](const RDPoint & a, const RDPoint & b) {
    return point_key(a) < point_key(b);
  });
  result.runs = std::move(records);
  return result;
}

SweepResult sweep(const SweepConfig & cfg)
{
  cfg.validate();
  if (cfg.inputs.empty()) {
    throw ConfigError("sweep needs at least one input");
  }
  const std::vector<Video> videos = load_inputs(cfg);
  return sweep(cfg, videos);
}

nlohmann::json SweepResult::manifest(const SweepConfig & cfg) const
{
  nlohmann::json j;
  j["tool"] = "opvc";
  j["version"] = kToolVersion;
  j["config"] = cfg.to_json();
  auto run_json = [](const RunRecord & r) {
    nlohmann::json o = {
      {"video", r.video_id}, {"method", std::string(to_string(r.method))},
      {"width", r.width},    {"height", r.height},
      {"frames", r.frames},  {"delta", r.delta},
      {"K", r.total_events}, {"rate", r.rate},
      {"wall_time", r.wall_seconds}};
    for (const auto & [m, v] : r.distortion) {
      o[std::string(to_string(m))] = v;
    }
    if (!r.error.empty()) {
      o["error"] = r.error;
    }
    return o;
  };
  j["runs"] = nlohmann::json::array();
  for (const auto & r : runs) {
    j["runs"].push_back(run_json(r));
  }
  j["failures"] = nlohmann::json::array();
  for (const auto & r : failures) {
    j["failures"].push_back(run_json(r));
  }
  return j;
}

std::vector<RDPoint> curve(std::span<const RDPoint> table, Method method, std::uint32_t width, std::uint32_t height)
{
  std::vector<RDPoint> out;
  for (const auto & p : table) {
    if (p.method == method && p.width == width && p.height == height) {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const RDPoint & a, const RDPoint & b) { return a.delta < b.delta; });
  return out;
}

std::optional<double> rate_at_distortion(std::span<const RDPoint> curve, Metric metric, double target)
{
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const auto d1 = curve[k].value(metric);
    const auto d2 = curve[k + 1].value(metric);
    if (!d1 || !d2) {
      return std::nullopt;
    }
    const double lo = std::min(*d1, *d2);
    const double hi = std::max(*d1, *d2);
    if (target < lo || target > hi) {
      continue;
    }
    if (*d1 == *d2) {
      return std::min(curve[k].rate, curve[k + 1].rate);
    }
    const double t = (target - *d1) / (*d2 - *d1);
    return curve[k].rate + t * (curve[k + 1].rate - curve[k].rate);
  }
  if (curve.size() == 1 && curve[0].value(metric) == target) {
    return curve[0].rate;
  }
  return std::nullopt;
}

std::string emit_csv(std::span<const RDPoint> table)
{
  if (table.empty()) {
    throw EmptyTableError();
  }
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto & p : table) {
    for (const auto & [m, v] : p.distortion) {
      out += std::string(to_string(p.method)) + "," + std::to_string(p.width) + "," +
             std::to_string(p.height) + "," + fmt_double(p.delta) + "," + fmt_double(p.rate) + "," +
             std::string(to_string(m)) + "," + fmt_double(v) + "," + std::to_string(p.video_count) +
             "," + std::to_string(p.total_events) + "\n";
    }
  }
  return out;
}

std::vector<RDPoint> parse_csv(std::string_view csv)
{
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("CSV header does not match the RD schema", 0);
  }
  std::vector<RDPoint> out;
  std::size_t offset = line.size() + 1;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      f.push_back(cell);
    }
    if (f.size() != 9) {
      throw ParseError("CSV row needs 9 fields", line_start);
    }
    try {
      const auto method = parse_method(f[0]);
      const auto metric = parse_metric(f[5]);
      if (!method || !metric) {
        throw ParseError("unknown method or metric", line_start);
      }
      RDPoint p;
      p.method = *method;
      p.width = static_cast<std::uint32_t>(std::stoul(f[1]));
      p.height = static_cast<std::uint32_t>(std::stoul(f[2]));
      p.delta = std::stod(f[3]);
      p.rate = std::stod(f[4]);
      p.video_count = static_cast<std::uint32_t>(std::stoul(f[7]));
      p.total_events = std::stoull(f[8]);
      const double v = std::stod(f[6]);
      if (!out.empty()) {
        RDPoint & last = out.back();
        if (last.method == p.method && last.width == p.width && last.height == p.height &&
            last.delta == p.delta && last.rate == p.rate && last.video_count == p.video_count &&
            last.total_events == p.total_events && !last.value(*metric)) {
          last.distortion.emplace_back(*metric, v);
          continue;
        }
      }
      p.distortion.emplace_back(*metric, v);
      out.push_back(std::move(p));
    } catch (const std::logic_error &) {
      throw ParseError("malformed number in CSV row", line_start);
    }
  }
  return out;
}

std::string emit_svg_plot(std::span<const RDPoint> table)
{
  if (table.empty() || table.front().distortion.empty()) {
    throw EmptyTableError();
  }
  const Metric metric = table.front().distortion.front().first;
  constexpr double W = 800, H = 520, left = 80, right = 200, top = 30, bottom = 60;
  const double pw = W - left - right;
  const double ph = H - top - bottom;

  double rmin = INFINITY, rmax = -INFINITY, dmin = INFINITY, dmax = -INFINITY;
  for (const auto & p : table) {
    const auto v = p.value(metric);
    if (!v || !std::isfinite(*v)) {
      continue;
    }
    if (p.rate > 0.0) {
      rmin = std::min(rmin, std::log10(p.rate));
      rmax = std::max(rmax, std::log10(p.rate));
    }
    dmin = std::min(dmin, *v);
    dmax = std::max(dmax, *v);
  }
  if (!std::isfinite(rmin)) {
    rmin = -1.0;
    rmax = 0.0;
  }
  if (rmax - rmin < 1e-9) {
    rmin -= 0.5;
    rmax += 0.5;
  }
  if (!std::isfinite(dmin)) {
    dmin = 0.0;
    dmax = 1.0;
  }
  if (dmax - dmin < 1e-9) {
    dmin -= 0.05;
    dmax += 0.05;
  }
  auto sx = [&](double rate) { return left + (std::log10(rate) - rmin) / (rmax - rmin) * pw; };
  auto sy = [&](double d) { return top + (1.0 - (d - dmin) / (dmax - dmin)) * ph; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = static_cast<int>(std::ceil(rmin)); k <= static_cast<int>(std::floor(rmax)); ++k) {
    const double x = left + (k - rmin) / (rmax - rmin) * pw;
    svg << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" font-size=\"11\" text-anchor=\"middle\">1e"
        << k << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double d = dmin + (dmax - dmin) * k / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(d) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << d
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15
      << "\" font-size=\"13\" text-anchor=\"middle\">rate (events / pixel / frame, log scale)</text>\n"
      << "<text x=\"20\" y=\"" << top + ph / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + ph / 2 << ")\">" << to_string(metric) << "</text>\n";

  static constexpr const char * palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::vector<std::tuple<Method, std::uint32_t, std::uint32_t>> series;
  for (const auto & p : table) {
    const auto key = std::make_tuple(p.method, p.width, p.height);
    if (std::find(series.begin(), series.end(), key) == series.end()) {
      series.push_back(key);
    }
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto & [method, w, h] = series[s];
    const char * color = palette[s % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (method == Method::saec ? " stroke-dasharray=\"6,3\"" : "") << " points=\"";
    bool first = true;
    for (const auto & p : curve(table, method, w, h)) {
      const auto v = p.value(metric);
      if (p.rate <= 0.0 || !v || !std::isfinite(*v)) {
        continue;
      }
      svg << (first ? "" : " ") << sx(p.rate) << "," << sy(*v);
      first = false;
    }
    svg << "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << W - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 45 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << W - right + 52 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << (method == Method::saec ? "SAEC " : "OPVC ") << w << "x" << h << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace opvc
