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

#include "nccalign/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <tuple>

#include "nccalign/errors.hpp"
#include "parallel.hpp"

namespace nccalign {

BlockGrid partition_template(int width, int height, int block_size, double crop_fraction) {
  if (block_size < kMinBlockSize) {
    throw ArgumentError("block size must be at least " + std::to_string(kMinBlockSize) +
                        ", got " + std::to_string(block_size));
  }
  if (!(crop_fraction >= 0.0 && crop_fraction <= kMaxCropFraction)) {
    throw ArgumentError("crop fraction must lie in [0, 0.10], got " +
                        std::to_string(crop_fraction));
  }
  BlockGrid grid;
  grid.image_width = width;
  grid.image_height = height;
  grid.block_size = block_size;
  // The nudge absorbs representation error, e.g. 0.07 / 2 * 200.
  grid.crop_margin_x = static_cast<int>(std::floor(crop_fraction / 2.0 * width + 1e-9));
  grid.crop_margin_y = static_cast<int>(std::floor(crop_fraction / 2.0 * height + 1e-9));
  const int cropped_w = width - 2 * grid.crop_margin_x;
  const int cropped_h = height - 2 * grid.crop_margin_y;
  grid.cols = cropped_w / block_size;
  grid.rows = cropped_h / block_size;
  if (grid.cols < 1 || grid.rows < 1) {
    throw ArgumentError("cropped region " + std::to_string(cropped_w) + "x" +
                        std::to_string(cropped_h) + " is smaller than one " +
                        std::to_string(block_size) + "px block");
  }
  grid.origins.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      grid.origins.push_back(
          {grid.crop_margin_x + c * block_size, grid.crop_margin_y + r * block_size});
    }
  }
  return grid;
}

BlockGrid partition_template(const GrayImage& image, int block_size, double crop_fraction) {
  return partition_template(image.width(), image.height(), block_size, crop_fraction);
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::full: return "full";
    case Method::full_fast: return "full-fast";
    case Method::diag: return "diag";
    case Method::diag_fast: return "diag-fast";
    case Method::stream: return "stream";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::full, Method::full_fast, Method::diag, Method::diag_fast,
                   Method::stream}) {
    if (name == to_string(m)) return m;
  }
  throw ArgumentError("unknown method '" + std::string(name) +
                      "' (expected full|full-fast|diag|diag-fast|stream)");
}

ShiftRange default_search_range(int block_size) {
  return ShiftRange::symmetric(block_size / 8);
}

std::string_view to_string(BlockStatus status) noexcept {
  switch (status) {
    case BlockStatus::valid: return "valid";
    case BlockStatus::interpolated: return "interpolated";
    case BlockStatus::invalid: return "invalid";
  }
  return "unknown";
}

std::size_t DisparityField::count(BlockStatus status) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      blocks.begin(), blocks.end(), [status](const BlockDisparity& b) { return b.status == status; }));
}

// ---------------------------------------------------------------------------
// Block matching

DisparityField estimate_disparity(const GrayImage& template_image, const GrayImage& reference,
                                  const BlockGrid& grid, const AlignOptions& options,
                                  OpCounts* counts) {
  if (grid.image_width != template_image.width() ||
      grid.image_height != template_image.height()) {
    throw ArgumentError("block grid does not match the template dimensions");
  }
  if (reference.width() < template_image.width() || reference.height() < template_image.height()) {
    throw ArgumentError("reference must be at least as large as the template");
  }
  options.range.validate();
  options.noise.validate();
  const Method method = options.method;
  if (to_string(method) == "unknown") throw ArgumentError("unknown method");

  const bool needs_sum = method == Method::full_fast;
  const bool needs_diag = method == Method::diag_fast || method == Method::stream;
  const SumTables sum_tables = needs_sum ? SumTables(reference) : SumTables();
  const DiagTables diag_tables = needs_diag ? DiagTables(reference) : DiagTables();
  const MovingAverageConfig ma =
      options.moving_average.value_or(MovingAverageConfig::boxcar(
          static_cast<std::size_t>(grid.block_size)));

  DisparityField field;
  field.rows = grid.rows;
  field.cols = grid.cols;
  field.blocks.assign(grid.count(), BlockDisparity{});
  std::vector<OpCounts> block_counts(counts != nullptr ? grid.count() : 0);

  detail::parallel_for(grid.count(), options.threads, [&](std::size_t b) {
    const PixelCoord origin = grid.origins[b];
    const GrayImage block =
        template_image.crop(origin.x, origin.y, grid.block_size, grid.block_size);
    OpCounts* tally = counts != nullptr ? &block_counts[b] : nullptr;
    CorrelationMap map;
    switch (method) {
      case Method::full:
        map = ncc_full_naive(block, reference, origin, options.range);
        break;
      case Method::full_fast:
        map = ncc_full_fast(block, reference, origin, options.range, sum_tables, tally);
        break;
      case Method::diag:
        map = ncc_diag(block, reference, origin, options.range, options.orientation);
        break;
      case Method::diag_fast:
        map = ncc_diag_fast(block, reference, origin, options.range, options.orientation,
                            diag_tables, tally);
        break;
      case Method::stream:
        map = ncc_stream(block, reference, origin, options.range, options.orientation, ma,
                         options.noise, diag_tables, b);
        break;
    }
    BlockDisparity& out = field.blocks[b];
    if (const auto best = best_shift(map)) {
      out = {static_cast<double>(best->du), static_cast<double>(best->dv), best->coeff,
             BlockStatus::valid};
    } else {
      out = {0.0, 0.0, std::numeric_limits<double>::quiet_NaN(), BlockStatus::invalid};
    }
  });

  if (counts != nullptr) {
    for (const OpCounts& c : block_counts) *counts += c;
  }
  return field;
}

DisparityField fill_invalid(DisparityField field) {
  if (field.count(BlockStatus::valid) == 0) {
    throw UnalignableError("no block produced a valid disparity");
  }
  while (field.count(BlockStatus::invalid) > 0) {
    DisparityField next = field;
    std::size_t filled = 0;
    for (int r = 0; r < field.rows; ++r) {
      for (int c = 0; c < field.cols; ++c) {
        if (field.at(r, c).status != BlockStatus::invalid) continue;
        double du = 0.0;
        double dv = 0.0;
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr;
            const int cc = c + dc;
            if ((dr == 0 && dc == 0) || rr < 0 || cc < 0 || rr >= field.rows || cc >= field.cols) {
              continue;
            }
            const BlockDisparity& nb = field.at(rr, cc);
            if (nb.status == BlockStatus::invalid) continue;
            du += nb.du;
            dv += nb.dv;
            ++n;
          }
        }
        if (n == 0) continue;
        next.at(r, c) = {du / n, dv / n, std::numeric_limits<double>::quiet_NaN(),
                         BlockStatus::interpolated};
        ++filled;
      }
    }
    // At least one valid block exists, so every pass on a connected lattice fills something.
    if (filled == 0) throw UnalignableError("invalid blocks cannot be reached from valid ones");
    field = std::move(next);
  }
  return field;
}

// ---------------------------------------------------------------------------
// Dense field and warping

DenseDisparity interpolate_disparity(const DisparityField& field, const BlockGrid& grid,
                                     int width, int height) {
  if (field.rows != grid.rows || field.cols != grid.cols) {
    throw ArgumentError("disparity field does not match the block grid");
  }
  if (field.count(BlockStatus::invalid) > 0) {
    throw ArgumentError("interpolate_disparity needs a filled field (run fill_invalid)");
  }
  if (width < 1 || height < 1) throw ArgumentError("dense extent must be positive");

  DenseDisparity dense;
  dense.width = width;
  dense.height = height;
  dense.du.resize(static_cast<std::size_t>(width) * height);
  dense.dv.resize(dense.du.size());

  // Lattice coordinate of a pixel, clamped to the centres' extent.
  auto lattice = [](double pos, double first_center, int block, int count) {
    const double f = std::clamp((pos - first_center) / block, 0.0, static_cast<double>(count - 1));
    int i0 = static_cast<int>(std::floor(f));
    if (i0 >= count - 1) i0 = std::max(0, count - 2);
    const int i1 = std::min(i0 + 1, count - 1);
    return std::tuple{i0, i1, f - i0};
  };

  const double cx0 = grid.center_x(0);
  const double cy0 = grid.center_y(0);
  for (int y = 0; y < height; ++y) {
    const auto [r0, r1, ty] = lattice(y, cy0, grid.block_size, grid.rows);
    for (int x = 0; x < width; ++x) {
      const auto [c0, c1, tx] = lattice(x, cx0, grid.block_size, grid.cols);
      auto blend = [&](auto member) {
        const double top = field.at(r0, c0).*member +
                           tx * (field.at(r0, c1).*member - field.at(r0, c0).*member);
        const double bottom = field.at(r1, c0).*member +
                              tx * (field.at(r1, c1).*member - field.at(r1, c0).*member);
        return top + ty * (bottom - top);
      };
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      dense.du[i] = blend(&BlockDisparity::du);
      dense.dv[i] = blend(&BlockDisparity::dv);
    }
  }
  return dense;
}

WarpResult warp(const GrayImage& template_image, const DenseDisparity& dense) {
  if (dense.width != template_image.width() || dense.height != template_image.height()) {
    throw ArgumentError("dense disparity does not match the template extent");
  }
  const int w = template_image.width();
  const int h = template_image.height();
  WarpResult out{GrayImage(w, h), ImageMask::all(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double sx = x - dense.du_at(x, y);
      const double sy = y - dense.dv_at(x, y);
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!(sx >= 0.0 && sy >= 0.0 && sx <= w - 1 && sy <= h - 1)) {
        out.mask.valid[i] = 0;
        continue;
      }
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      const double top = template_image(x0, y0) +
                         fx * (template_image(x1, y0) - template_image(x0, y0));
      const double bottom = template_image(x0, y1) +
                            fx * (template_image(x1, y1) - template_image(x0, y1));
      out.image(x, y) = top + fy * (bottom - top);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics and robustness transforms

double global_correlation(const GrayImage& a, const GrayImage& b, const ImageMask& mask) {
  if (a.width() != b.width() || a.height() != b.height() || mask.width != a.width() ||
      mask.height != a.height()) {
    throw ArgumentError("global_correlation: image and mask extents differ");
  }
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double n = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (!mask.valid[i]) continue;
    mean_a += pa[i];
    mean_b += pb[i];
    n += 1.0;
  }
  if (n < 2.0) throw MetricError("global_correlation: fewer than two masked pixels");
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (!mask.valid[i]) continue;
    const double da = pa[i] - mean_a;
    const double db = pb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a < kVarianceEpsilon || var_b < kVarianceEpsilon) {
    throw MetricError("global_correlation: zero variance under mask");
  }
  return cov / std::sqrt(var_a * var_b);
}

double global_correlation(const GrayImage& a, const GrayImage& b) {
  return global_correlation(a, b, ImageMask::all(a.width(), a.height()));
}

double improvement_percent(double before, double after) {
  if (before == 0.0) throw MetricError("improvement_percent: zero baseline correlation");
  return 100.0 * (after - before) / before;
}

GrayImage scale_intensity(const GrayImage& image, double factor) {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw ArgumentError("intensity scale factor must be finite and non-negative");
  }
  GrayImage out = image;
  for (double& v : out.pixels()) v *= factor;
  return out;
}

GrayImage random_intensity_perturbation(const GrayImage& image, std::uint64_t seed,
                                        double amplitude) {
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw ArgumentError("perturbation amplitude must lie in [0, 1]");
  }
  GrayImage out = image;
  if (amplitude == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> factor(1.0 - amplitude, 1.0 + amplitude);
  for (double& v : out.pixels()) v = std::max(0.0, v * factor(rng));
  return out;
}

double block_match_rate(const DisparityField& field, const BlockGrid& grid,
                        const GroundTruth& truth) {
  if (field.blocks.size() != grid.count() || grid.count() == 0) {
    throw ArgumentError("block_match_rate: field does not match grid");
  }
  std::size_t hits = 0;
  for (std::size_t b = 0; b < grid.count(); ++b) {
    const BlockDisparity& d = field.blocks[b];
    if (d.status != BlockStatus::valid) continue;
    const PixelCoord o = grid.origins[b];
    const RegionShift s = truth.at(o.x + grid.block_size / 2, o.y + grid.block_size / 2);
    if (d.du == s.du && d.dv == s.dv) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(grid.count());
}

}  // namespace nccalign
