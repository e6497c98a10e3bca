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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nccalign/align.hpp"
#include "nccalign/power.hpp"
#include "run_config.hpp"

namespace nccalign::cli {

struct StereoInput {
  GrayImage template_image;
  GrayImage reference;
  std::optional<GroundTruth> truth;  ///< only for synthetic input
};

/// Loads the PGM pair named in the config, or generates the synthetic pair.
StereoInput load_input(const RunConfig& cfg);

struct AlignmentResult {
  BlockGrid grid;
  DisparityField raw;     ///< straight from estimate_disparity
  DisparityField filled;  ///< after fill_invalid
  DenseDisparity dense;
  WarpResult aligned;
  double corr_before = 0.0;
  double corr_after = 0.0;
  double improvement_pct = 0.0;
  std::optional<double> match_rate;
};

/// Partition, estimate, fill, interpolate, warp and score.
AlignmentResult run_alignment(const GrayImage& template_image, const GrayImage& reference,
                              const std::optional<GroundTruth>& truth, const RunConfig& cfg,
                              const AlignOptions& options);

/// align: disparity.csv, metrics.csv, aligned.pgm, disparity_x.pgm, disparity_y.pgm
AlignmentResult cmd_align(const RunConfig& cfg);

/// gen: template.pgm, reference.pgm, truth.csv
void cmd_gen(const RunConfig& cfg);

struct MethodTiming {
  Method method;
  std::vector<double> run_ms;
  double median_ms = 0.0;
};

struct MethodOps {
  Method method;
  std::size_t blocks = 0;
  OpCounts counts;
  std::uint64_t mults_per_shift = 0;
  std::uint64_t adds_per_shift = 0;
};

struct BenchReport {
  std::vector<MethodOps> ops;        ///< full-fast then diag-fast
  std::vector<MethodTiming> timing;  ///< full-fast then diag-fast
  double speedup = 0.0;              ///< full-fast median / diag-fast median
  std::uint64_t mult_ratio = 0;      ///< full-fast / diag-fast multiplies per shift
};

/// bench: bench_ops.csv (deterministic) and bench_timing.csv (wall clock).
/// Each method gets one untimed warm-up run, then cfg.bench_runs timed runs.
BenchReport cmd_bench(const RunConfig& cfg);

struct NoiseSweepRow {
  double multiplier_fraction = 0.0;
  std::uint64_t noise_seed = 0;
  double corr_after = 0.0;
  double match_rate = 0.0;  ///< NaN without ground truth
};

struct NoiseSweepSummary {
  double multiplier_fraction = 0.0;
  int runs = 0;
  double mean_corr_after = 0.0;
  double std_corr_after = 0.0;
  double mean_match_rate = 0.0;
  double std_match_rate = 0.0;
};

struct NoiseSweepReport {
  std::vector<NoiseSweepRow> rows;
  std::vector<NoiseSweepSummary> summary;  ///< in cfg.multiplier_fractions order
};

/// noise-sweep: streaming alignment for every multiplier fraction over seeds
/// cfg.seed .. cfg.seed + seeds - 1. Writes noise_sweep.csv and
/// noise_sweep_summary.csv.
NoiseSweepReport cmd_noise_sweep(const RunConfig& cfg);

struct RobustnessRow {
  std::string condition;  ///< "baseline" or "perturbed"
  double corr_before = 0.0;
  double corr_after = 0.0;
  double improvement_pct = 0.0;
  double match_rate = 0.0;
  std::size_t blocks_equal_baseline = 0;
  std::size_t blocks = 0;
  DisparityField field;
};

/// robustness: aligns the unperturbed and the perturbed template and writes
/// robustness.csv.
std::vector<RobustnessRow> cmd_robustness(const RunConfig& cfg);

/// power: Table-style listing on `out` plus power.csv.
PowerBudget cmd_power(const RunConfig& cfg, std::ostream& out);

/// Exit status for an exception escaping a command: 1 for computation errors,
/// 2 for usage and I/O errors.
int exit_status_for(const std::exception& e) noexcept;

}  // namespace nccalign::cli
