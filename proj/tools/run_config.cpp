/*
 * Copyright (C) 2026 The nccalign Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "nccalign/errors.hpp"

namespace nccalign::cli {
namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ArgumentError("--" + std::string(key) + ": invalid value '" + std::string(value) +
                      "' (expected " + std::string(want) + ")");
}

template <class T>
T parse_number(std::string_view key, std::string_view text, std::string_view want) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last) bad_value(key, text, want);
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::pair<int, int> parse_pair(std::string_view key, std::string_view text, char sep,
                               std::string_view want) {
  const auto parts = split(text, sep);
  if (parts.size() != 2) bad_value(key, text, want);
  return {parse_number<int>(key, parts[0], want), parse_number<int>(key, parts[1], want)};
}

std::string join_shifts(const std::vector<RegionShift>& shifts) {
  std::string out;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(shifts[i].du) + "," + std::to_string(shifts[i].dv);
  }
  return out;
}

std::string format_range(int lo, int hi) { return std::to_string(lo) + ":" + std::to_string(hi); }

}  // namespace

SyntheticSpec RunConfig::default_synthetic() {
  return SyntheticSpec::quadrants(512, 512, {{3, 5}, {-6, 2}, {8, -4}, {-2, -7}}, 7, 0.01);
}

AlignOptions RunConfig::align_options() const {
  AlignOptions opt;
  opt.method = method;
  opt.range = search_range();
  opt.orientation = orientation;
  opt.moving_average = moving_average;
  opt.noise = noise;
  opt.noise.seed = seed;
  opt.threads = threads;
  return opt;
}

void RunConfig::validate() const {
  if (block_size < kMinBlockSize) {
    throw ArgumentError("--block must be at least " + std::to_string(kMinBlockSize));
  }
  if (!(crop_fraction >= 0.0 && crop_fraction <= kMaxCropFraction)) {
    throw ArgumentError("--crop must lie in [0, 0.10]");
  }
  search_range().validate();
  if (moving_average) moving_average->validate();
  noise.validate();
  if (template_path.empty() != reference_path.empty()) {
    throw ArgumentError("--template and --reference must be given together");
  }
  if (synthetic_input()) synthetic.validate();
  if (maxval != 255 && maxval != 65535) throw ArgumentError("--maxval must be 255 or 65535");
  if (seed_count < 1) throw ArgumentError("--seeds must be at least 1");
  if (multiplier_fractions.empty()) throw ArgumentError("--fractions must not be empty");
  for (double f : multiplier_fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw ArgumentError("--fractions must be >= 0");
  }
  if (channels < 0 || channels % 2 != 0) {
    throw ArgumentError("--channels must be even and non-negative");
  }
  if (bench_runs < 1) throw ArgumentError("--runs must be at least 1");
  const double p = robustness_value();
  if (robustness_mode == RobustnessMode::uniform && !(p >= 0.0 && std::isfinite(p))) {
    throw ArgumentError("--parameter must be a non-negative scale factor");
  }
  if (robustness_mode == RobustnessMode::random && !(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError("--parameter must be an amplitude in [0, 1]");
  }
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "method",     "block",        "crop",          "search-du",   "search-dv",
      "ma",         "orientation",  "noise-mult",    "noise-int",   "noise-cadence",
      "seed",       "template",     "reference",     "size",        "regions",
      "shifts",     "texture-seed", "noise-floor",   "maxval",      "fractions",
      "seeds",      "mode",         "parameter",     "channels",    "runs"};
  return keys;
}

std::vector<std::string> RunConfig::header_lines() const {
  std::vector<std::string> lines;
  lines.push_back(std::string(kFormatTag) + " " + command);
  auto add = [&](std::string_view key, const std::string& value) {
    lines.push_back(std::string(key) + "=" + value);
  };
  const ShiftRange r = search_range();
  add("method", std::string(to_string(method)));
  add("block", std::to_string(block_size));
  add("crop", format_number(crop_fraction));
  add("search-du", range ? format_range(r.du_min, r.du_max) : "auto");
  add("search-dv", range ? format_range(r.dv_min, r.dv_max) : "auto");
  if (!moving_average) {
    add("ma", "auto");
  } else if (moving_average->kind == AverageKind::boxcar) {
    add("ma", "boxcar:" + std::to_string(moving_average->window_len));
  } else {
    add("ma", "pole:" + format_number(moving_average->alpha));
  }
  add("orientation", orientation == DiagOrientation::main ? "main" : "anti");
  add("noise-mult", format_number(noise.multiplier_fraction));
  add("noise-int", format_number(noise.integrator_fraction));
  add("noise-cadence", noise.cadence == NoiseCadence::per_sample ? "sample" : "window");
  add("seed", std::to_string(seed));
  add("template", synthetic_input() ? "synthetic" : template_path);
  add("reference", synthetic_input() ? "synthetic" : reference_path);
  add("size", std::to_string(synthetic.width) + "x" + std::to_string(synthetic.height));
  add("regions", std::to_string(synthetic.region_rows) + "x" +
                     std::to_string(synthetic.region_cols));
  add("shifts", join_shifts(synthetic.shifts));
  add("texture-seed", std::to_string(synthetic.texture_seed));
  add("noise-floor", format_number(synthetic.noise_floor));
  add("maxval", std::to_string(maxval));
  std::string fractions;
  for (std::size_t i = 0; i < multiplier_fractions.size(); ++i) {
    if (i) fractions += ',';
    fractions += format_number(multiplier_fractions[i]);
  }
  add("fractions", fractions);
  add("seeds", std::to_string(seed_count));
  add("mode", robustness_mode == RobustnessMode::uniform ? "uniform" : "random");
  add("parameter", robustness_parameter ? format_number(*robustness_parameter) : "auto");
  add("channels", std::to_string(channels));
  add("runs", std::to_string(bench_runs));
  return lines;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "method") {
    cfg.method = parse_method(value);
  } else if (key == "block") {
    cfg.block_size = parse_number<int>(key, value, "an integer");
  } else if (key == "crop") {
    cfg.crop_fraction = parse_number<double>(key, value, "a fraction");
  } else if (key == "search-du" || key == "search-dv") {
    if (value == "auto") {
      cfg.range.reset();
      return;
    }
    const auto [lo, hi] = parse_pair(key, value, ':', "MIN:MAX");
    ShiftRange r = cfg.search_range();
    if (key == "search-du") {
      r.du_min = lo;
      r.du_max = hi;
    } else {
      r.dv_min = lo;
      r.dv_max = hi;
    }
    cfg.range = r;
  } else if (key == "ma") {
    if (value == "auto") {
      cfg.moving_average.reset();
    } else if (value.starts_with("boxcar:")) {
      cfg.moving_average = MovingAverageConfig::boxcar(
          parse_number<std::size_t>(key, value.substr(7), "boxcar:L"));
    } else if (value.starts_with("pole:")) {
      cfg.moving_average =
          MovingAverageConfig::single_pole(parse_number<double>(key, value.substr(5), "pole:ALPHA"));
    } else {
      bad_value(key, value, "boxcar:L or pole:ALPHA");
    }
  } else if (key == "orientation") {
    if (value == "main") {
      cfg.orientation = DiagOrientation::main;
    } else if (value == "anti") {
      cfg.orientation = DiagOrientation::anti;
    } else {
      bad_value(key, value, "main or anti");
    }
  } else if (key == "noise-mult") {
    cfg.noise.multiplier_fraction = parse_number<double>(key, value, "a fraction");
  } else if (key == "noise-int") {
    cfg.noise.integrator_fraction = parse_number<double>(key, value, "a fraction");
  } else if (key == "noise-cadence") {
    if (value == "sample") {
      cfg.noise.cadence = NoiseCadence::per_sample;
    } else if (value == "window") {
      cfg.noise.cadence = NoiseCadence::per_window;
    } else {
      bad_value(key, value, "sample or window");
    }
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value, "an unsigned integer");
  } else if (key == "template") {
    cfg.template_path = value == "synthetic" ? "" : std::string(value);
  } else if (key == "reference") {
    cfg.reference_path = value == "synthetic" ? "" : std::string(value);
  } else if (key == "size") {
    const auto [w, h] = parse_pair(key, value, 'x', "WxH");
    cfg.synthetic.width = w;
    cfg.synthetic.height = h;
  } else if (key == "regions") {
    const auto [r, c] = parse_pair(key, value, 'x', "RxC");
    cfg.synthetic.region_rows = r;
    cfg.synthetic.region_cols = c;
  } else if (key == "shifts") {
    std::vector<RegionShift> shifts;
    for (auto part : split(value, ';')) {
      const auto [du, dv] = parse_pair(key, part, ',', "du,dv;du,dv;...");
      shifts.push_back({du, dv});
    }
    cfg.synthetic.shifts = std::move(shifts);
  } else if (key == "texture-seed") {
    cfg.synthetic.texture_seed = parse_number<std::uint64_t>(key, value, "an unsigned integer");
  } else if (key == "noise-floor") {
    cfg.synthetic.noise_floor = parse_number<double>(key, value, "a standard deviation");
  } else if (key == "maxval") {
    cfg.maxval = parse_number<int>(key, value, "255 or 65535");
  } else if (key == "fractions") {
    std::vector<double> fractions;
    for (auto part : split(value, ',')) {
      fractions.push_back(parse_number<double>(key, part, "comma-separated fractions"));
    }
    cfg.multiplier_fractions = std::move(fractions);
  } else if (key == "seeds") {
    cfg.seed_count = parse_number<int>(key, value, "an integer");
  } else if (key == "mode") {
    if (value == "uniform") {
      cfg.robustness_mode = RobustnessMode::uniform;
    } else if (value == "random") {
      cfg.robustness_mode = RobustnessMode::random;
    } else {
      bad_value(key, value, "uniform or random");
    }
  } else if (key == "parameter") {
    if (value == "auto") {
      cfg.robustness_parameter.reset();
    } else {
      cfg.robustness_parameter = parse_number<double>(key, value, "a number");
    }
  } else if (key == "channels") {
    cfg.channels = parse_number<int>(key, value, "an even integer");
  } else if (key == "runs") {
    cfg.bench_runs = parse_number<int>(key, value, "an integer");
  } else {
    throw ArgumentError("unknown setting '" + std::string(key) + "'");
  }
}

void apply_header(RunConfig& cfg, std::istream& in) {
  std::string line;
  bool tagged = false;
  while (std::getline(in, line)) {
    if (!line.starts_with("# ")) break;
    const std::string_view body = std::string_view(line).substr(2);
    if (body.starts_with(kFormatTag)) {
      const auto space = body.find(' ');
      if (space == std::string_view::npos) throw ArgumentError("header format line lacks a command");
      cfg.command = std::string(body.substr(space + 1));
      tagged = true;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;
    apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1));
  }
  if (!tagged) throw ArgumentError("no " + std::string(kFormatTag) + " header found");
}

void apply_header(RunConfig& cfg, const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open " + csv_path.string());
  apply_header(cfg, in);
}

}  // namespace nccalign::cli
