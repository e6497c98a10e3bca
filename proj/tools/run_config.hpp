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

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nccalign/align.hpp"
#include "nccalign/synthetic.hpp"

namespace nccalign::cli {

inline constexpr std::string_view kFormatTag = "nccalign/1";

enum class RobustnessMode { uniform, random };

/// Everything that determines the output of a subcommand. Settings use the
/// same key names as the command-line flags, so `apply_setting(cfg, "block",
/// "64")` is equivalent to `--block 64`, and header_lines() round-trips
/// through apply_header().
struct RunConfig {
  std::string command = "align";

  Method method = Method::diag_fast;
  int block_size = 64;
  double crop_fraction = kMaxCropFraction;
  std::optional<ShiftRange> range;  ///< unset: default_search_range(block_size)
  std::optional<MovingAverageConfig> moving_average;  ///< unset: boxcar(block_size)
  DiagOrientation orientation = DiagOrientation::main;
  NoiseModel noise{0.0, 0.20, 1, NoiseCadence::per_sample};
  std::uint64_t seed = 1;

  std::string template_path;   ///< empty: synthetic pair
  std::string reference_path;
  SyntheticSpec synthetic = default_synthetic();

  std::filesystem::path out_dir = ".";
  unsigned threads = 0;  ///< not serialized; results do not depend on it
  int maxval = 255;

  // noise-sweep
  std::vector<double> multiplier_fractions{0.01, 0.10, 0.20};
  int seed_count = 10;
  // robustness
  RobustnessMode robustness_mode = RobustnessMode::uniform;
  std::optional<double> robustness_parameter;  ///< unset: 0.1 uniform, 0.5 random
  // power
  int channels = 64;
  // bench
  int bench_runs = 5;

  static SyntheticSpec default_synthetic();

  bool synthetic_input() const noexcept { return template_path.empty(); }
  ShiftRange search_range() const { return range.value_or(default_search_range(block_size)); }
  double robustness_value() const noexcept {
    return robustness_parameter.value_or(robustness_mode == RobustnessMode::uniform ? 0.1 : 0.5);
  }
  AlignOptions align_options() const;

  /// Throws ArgumentError on inconsistent settings.
  void validate() const;

  /// "key=value" lines (without the leading '#') describing the full config.
  std::vector<std::string> header_lines() const;
};

/// Applies one setting by its flag name (without dashes). Throws
/// ArgumentError for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Reads '#'-prefixed "key=value" lines from the top of a CSV written by this
/// tool and applies them. The format line sets the command.
void apply_header(RunConfig& cfg, std::istream& in);
void apply_header(RunConfig& cfg, const std::filesystem::path& csv_path);

/// Setting keys accepted by apply_setting, in header order.
const std::vector<std::string>& setting_keys();

}  // namespace nccalign::cli
