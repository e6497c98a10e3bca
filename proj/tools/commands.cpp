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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "csv.hpp"
#include "nccalign/errors.hpp"
#include "nccalign/pgm.hpp"

namespace nccalign::cli {
namespace {

std::filesystem::path prepare_out(const RunConfig& cfg, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir.string());
  return cfg.out_dir / name;
}

GrayImage normalized_map(const std::vector<double>& values, int width, int height) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = span > 0.0 ? (values[i] - *lo) / span : 0.0;
  }
  return GrayImage(width, height, std::move(out));
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation; zero for a single run.
double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

StereoInput load_input(const RunConfig& cfg) {
  if (cfg.synthetic_input()) {
    SyntheticPair pair = make_synthetic_stereo(cfg.synthetic);
    return {std::move(pair.template_image), std::move(pair.reference), std::move(pair.truth)};
  }
  for (const auto& p : {cfg.template_path, cfg.reference_path}) {
    if (!std::filesystem::exists(p)) throw IoError("input file not found: " + p);
  }
  return {load_pgm(cfg.template_path), load_pgm(cfg.reference_path), std::nullopt};
}

AlignmentResult run_alignment(const GrayImage& template_image, const GrayImage& reference,
                              const std::optional<GroundTruth>& truth, const RunConfig& cfg,
                              const AlignOptions& options) {
  if (template_image.width() != reference.width() ||
      template_image.height() != reference.height()) {
    throw ArgumentError("template and reference must have equal dimensions");
  }
  AlignmentResult res;
  res.grid = partition_template(template_image, cfg.block_size, cfg.crop_fraction);
  res.raw = estimate_disparity(template_image, reference, res.grid, options);
  res.filled = fill_invalid(res.raw);
  res.dense =
      interpolate_disparity(res.filled, res.grid, template_image.width(), template_image.height());
  res.aligned = warp(template_image, res.dense);
  res.corr_before = global_correlation(template_image, reference);
  res.corr_after = global_correlation(res.aligned.image, reference, res.aligned.mask);
  res.improvement_pct = improvement_percent(res.corr_before, res.corr_after);
  if (truth) res.match_rate = block_match_rate(res.raw, res.grid, *truth);
  return res;
}

AlignmentResult cmd_align(const RunConfig& cfg) {
  cfg.validate();
  const StereoInput input = load_input(cfg);
  AlignmentResult res =
      run_alignment(input.template_image, input.reference, input.truth, cfg, cfg.align_options());

  const auto header = cfg.header_lines();
  {
    CsvWriter csv(prepare_out(cfg, "disparity.csv"), header,
                  {"block_row", "block_col", "du", "dv", "coeff", "status"});
    for (int r = 0; r < res.filled.rows; ++r) {
      for (int c = 0; c < res.filled.cols; ++c) {
        const BlockDisparity& b = res.filled.at(r, c);
        csv.row(r, c, b.du, b.dv, b.coeff, to_string(b.status));
      }
    }
  }
  {
    CsvWriter csv(prepare_out(cfg, "metrics.csv"), header,
                  {"corr_before", "corr_after", "improvement_pct"});
    csv.row(res.corr_before, res.corr_after, res.improvement_pct);
  }
  save_pgm(res.aligned.image, prepare_out(cfg, "aligned.pgm"), cfg.maxval);
  save_pgm(normalized_map(res.dense.du, res.dense.width, res.dense.height),
           prepare_out(cfg, "disparity_x.pgm"), cfg.maxval);
  save_pgm(normalized_map(res.dense.dv, res.dense.width, res.dense.height),
           prepare_out(cfg, "disparity_y.pgm"), cfg.maxval);
  return res;
}

void cmd_gen(const RunConfig& cfg) {
  cfg.validate();
  const SyntheticPair pair = make_synthetic_stereo(cfg.synthetic);
  save_pgm(pair.template_image, prepare_out(cfg, "template.pgm"), cfg.maxval);
  save_pgm(pair.reference, prepare_out(cfg, "reference.pgm"), cfg.maxval);

  CsvWriter csv(prepare_out(cfg, "truth.csv"), cfg.header_lines(),
                {"region_row", "region_col", "x0", "y0", "x1", "y1", "du", "dv"});
  const SyntheticSpec& s = cfg.synthetic;
  for (int r = 0; r < s.region_rows; ++r) {
    for (int c = 0; c < s.region_cols; ++c) {
      const long long x0 = static_cast<long long>(c) * s.width / s.region_cols;
      const long long x1 = static_cast<long long>(c + 1) * s.width / s.region_cols;
      const long long y0 = static_cast<long long>(r) * s.height / s.region_rows;
      const long long y1 = static_cast<long long>(r + 1) * s.height / s.region_rows;
      const RegionShift sh = s.shifts[static_cast<std::size_t>(r) * s.region_cols + c];
      csv.row(r, c, x0, y0, x1, y1, sh.du, sh.dv);
    }
  }
}

BenchReport cmd_bench(const RunConfig& cfg) {
  cfg.validate();
  const StereoInput input = load_input(cfg);
  const BlockGrid grid = partition_template(input.template_image, cfg.block_size, cfg.crop_fraction);

  BenchReport report;
  for (Method method : {Method::full_fast, Method::diag_fast}) {
    AlignOptions opt = cfg.align_options();
    opt.method = method;
    opt.threads = 1;

    MethodOps ops{method, grid.count(), {}, 0, 0};
    estimate_disparity(input.template_image, input.reference, grid, opt, &ops.counts);
    if (ops.counts.shifts > 0) {
      ops.mults_per_shift = ops.counts.multiplies / ops.counts.shifts;
      ops.adds_per_shift = ops.counts.additions / ops.counts.shifts;
    }
    report.ops.push_back(ops);

    MethodTiming timing{method, {}, 0.0};
    estimate_disparity(input.template_image, input.reference, grid, opt);  // warm-up
    for (int run = 0; run < cfg.bench_runs; ++run) {
      const auto t0 = std::chrono::steady_clock::now();
      estimate_disparity(input.template_image, input.reference, grid, opt);
      const auto t1 = std::chrono::steady_clock::now();
      timing.run_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    timing.median_ms = median_of(timing.run_ms);
    report.timing.push_back(timing);
  }
  const double diag_ms = report.timing[1].median_ms;
  report.speedup = diag_ms > 0.0 ? report.timing[0].median_ms / diag_ms
                                 : std::numeric_limits<double>::infinity();
  if (report.ops[1].mults_per_shift > 0) {
    report.mult_ratio = report.ops[0].mults_per_shift / report.ops[1].mults_per_shift;
  }

  const auto header = cfg.header_lines();
  {
    CsvWriter csv(prepare_out(cfg, "bench_ops.csv"), header,
                  {"method", "block_size", "blocks", "shifts", "mults_per_shift", "adds_per_shift",
                   "total_mults", "total_adds", "mult_ratio_vs_full_fast"});
    for (const MethodOps& o : report.ops) {
      const std::uint64_t ratio =
          o.mults_per_shift > 0 ? report.ops[0].mults_per_shift / o.mults_per_shift : 0;
      csv.row(to_string(o.method), cfg.block_size, o.blocks, o.counts.shifts, o.mults_per_shift,
              o.adds_per_shift, o.counts.multiplies, o.counts.additions, ratio);
    }
  }
  {
    CsvWriter csv(prepare_out(cfg, "bench_timing.csv"), header,
                  {"method", "runs", "median_ms", "min_ms", "max_ms", "speedup_vs_full_fast"});
    for (const MethodTiming& t : report.timing) {
      const auto [lo, hi] = std::minmax_element(t.run_ms.begin(), t.run_ms.end());
      csv.row(to_string(t.method), static_cast<int>(t.run_ms.size()), t.median_ms, *lo, *hi,
              report.timing[0].median_ms / t.median_ms);
    }
  }
  return report;
}

NoiseSweepReport cmd_noise_sweep(const RunConfig& base) {
  RunConfig cfg = base;
  cfg.command = "noise-sweep";
  cfg.method = Method::stream;
  cfg.validate();
  const StereoInput input = load_input(cfg);

  NoiseSweepReport report;
  for (double fraction : cfg.multiplier_fractions) {
    std::vector<double> corr;
    std::vector<double> match;
    for (int k = 0; k < cfg.seed_count; ++k) {
      AlignOptions opt = cfg.align_options();
      opt.noise.multiplier_fraction = fraction;
      opt.noise.seed = cfg.seed + static_cast<std::uint64_t>(k);
      const AlignmentResult res =
          run_alignment(input.template_image, input.reference, input.truth, cfg, opt);
      report.rows.push_back({fraction, opt.noise.seed, res.corr_after,
                             res.match_rate.value_or(nan())});
      corr.push_back(res.corr_after);
      match.push_back(res.match_rate.value_or(nan()));
    }
    report.summary.push_back({fraction, cfg.seed_count, mean_of(corr), stddev_of(corr),
                              mean_of(match), stddev_of(match)});
  }

  const auto header = cfg.header_lines();
  {
    CsvWriter csv(prepare_out(cfg, "noise_sweep.csv"), header,
                  {"multiplier_fraction", "integrator_fraction", "noise_seed", "corr_after",
                   "match_rate"});
    for (const auto& r : report.rows) {
      csv.row(r.multiplier_fraction, cfg.noise.integrator_fraction, r.noise_seed, r.corr_after,
              r.match_rate);
    }
  }
  {
    CsvWriter csv(prepare_out(cfg, "noise_sweep_summary.csv"), header,
                  {"multiplier_fraction", "integrator_fraction", "runs", "mean_corr_after",
                   "std_corr_after", "mean_match_rate", "std_match_rate"});
    for (const auto& s : report.summary) {
      csv.row(s.multiplier_fraction, cfg.noise.integrator_fraction, s.runs, s.mean_corr_after,
              s.std_corr_after, s.mean_match_rate, s.std_match_rate);
    }
  }
  return report;
}

std::vector<RobustnessRow> cmd_robustness(const RunConfig& base) {
  RunConfig cfg = base;
  cfg.command = "robustness";
  cfg.validate();
  const StereoInput input = load_input(cfg);
  const AlignOptions opt = cfg.align_options();
  const double p = cfg.robustness_value();

  const GrayImage perturbed = cfg.robustness_mode == RobustnessMode::uniform
                                  ? scale_intensity(input.template_image, p)
                                  : random_intensity_perturbation(input.template_image, cfg.seed, p);

  std::vector<RobustnessRow> rows;
  const AlignmentResult baseline =
      run_alignment(input.template_image, input.reference, input.truth, cfg, opt);
  const AlignmentResult changed = run_alignment(perturbed, input.reference, input.truth, cfg, opt);
  for (const auto* res : {&baseline, &changed}) {
    RobustnessRow row;
    row.condition = res == &baseline ? "baseline" : "perturbed";
    row.corr_before = res->corr_before;
    row.corr_after = res->corr_after;
    row.improvement_pct = res->improvement_pct;
    row.match_rate = res->match_rate.value_or(nan());
    row.blocks = res->raw.blocks.size();
    for (std::size_t b = 0; b < row.blocks; ++b) {
      const BlockDisparity& x = res->raw.blocks[b];
      const BlockDisparity& y = baseline.raw.blocks[b];
      if (x.status == y.status && x.du == y.du && x.dv == y.dv) ++row.blocks_equal_baseline;
    }
    row.field = res->raw;
    rows.push_back(std::move(row));
  }

  CsvWriter csv(prepare_out(cfg, "robustness.csv"), cfg.header_lines(),
                {"condition", "mode", "parameter", "corr_before", "corr_after", "improvement_pct",
                 "match_rate", "blocks_equal_baseline", "blocks"});
  const bool uniform = cfg.robustness_mode == RobustnessMode::uniform;
  // The baseline row carries the identity parameter of the mode.
  const double identity = uniform ? 1.0 : 0.0;
  for (const auto& r : rows) {
    csv.row(r.condition, uniform ? "uniform" : "random", r.condition == "baseline" ? identity : p,
            r.corr_before, r.corr_after, r.improvement_pct, r.match_rate,
            r.blocks_equal_baseline, r.blocks);
  }
  return rows;
}

PowerBudget cmd_power(const RunConfig& base, std::ostream& out) {
  RunConfig cfg = base;
  cfg.command = "power";
  cfg.validate();
  const PowerBudget budget = power_budget(cfg.channels);

  out << std::left << std::setw(12) << "Component" << std::setw(10) << "Quantity"
      << "Power Consumption\n";
  for (const PowerEntry& e : budget.entries) {
    const bool micro = e.unit_power_mw < 0.01;
    std::ostringstream unit;
    unit << (micro ? e.unit_power_mw * 1000.0 : e.unit_power_mw) << (micro ? "uW" : "mW") << "/"
         << e.name;
    out << std::left << std::setw(12) << e.name << std::setw(10) << e.quantity << unit.str()
        << " x " << e.quantity << " = " << format_display(e.reported_mw) << "mW\n";
  }
  out << "Total power consumption: " << format_display(budget.total_mw()) << "mW\n";

  CsvWriter csv(prepare_out(cfg, "power.csv"), cfg.header_lines(),
                {"component", "quantity", "unit_power_mw", "power_mw", "exact_power_mw"});
  for (const PowerEntry& e : budget.entries) {
    csv.row(e.name, e.quantity, e.unit_power_mw, e.reported_mw, e.exact_mw());
  }
  csv.row_strings({"Total", "", "", format_number(budget.total_mw()),
                   format_number(budget.exact_total_mw())});
  return budget;
}

int exit_status_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UnalignableError*>(&e) != nullptr ||
      dynamic_cast<const MetricError*>(&e) != nullptr) {
    return 1;
  }
  if (dynamic_cast<const ArgumentError*>(&e) != nullptr ||
      dynamic_cast<const LoadError*>(&e) != nullptr ||
      dynamic_cast<const IoError*>(&e) != nullptr ||
      dynamic_cast<const SpecError*>(&e) != nullptr) {
    return 2;
  }
  return 1;
}

}  // namespace nccalign::cli
