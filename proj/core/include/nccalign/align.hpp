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
#include <string>
#include <string_view>
#include <vector>

#include "nccalign/diag.hpp"
#include "nccalign/image.hpp"
#include "nccalign/ncc.hpp"
#include "nccalign/stream.hpp"
#include "nccalign/synthetic.hpp"

namespace nccalign {

/// Largest total crop fraction accepted by partition_template.
inline constexpr double kMaxCropFraction = 0.10;
inline constexpr int kMinBlockSize = 8;

/// Regular lattice of square template blocks inside the cropped region.
struct BlockGrid {
  int image_width = 0;
  int image_height = 0;
  int block_size = 0;
  int crop_margin_x = 0;
  int crop_margin_y = 0;
  int rows = 0;
  int cols = 0;
  std::vector<PixelCoord> origins;  ///< row-major, uncropped template frame

  std::size_t count() const noexcept { return origins.size(); }
  PixelCoord origin(int row, int col) const noexcept {
    return origins[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(col)];
  }
  double center_x(int col) const noexcept {
    return crop_margin_x + col * block_size + (block_size - 1) / 2.0;
  }
  double center_y(int row) const noexcept {
    return crop_margin_y + row * block_size + (block_size - 1) / 2.0;
  }
};

/// Margins are floor(crop_fraction / 2 * dimension) per side; whole blocks
/// tile the cropped region from its top-left and partial blocks are dropped.
BlockGrid partition_template(int width, int height, int block_size, double crop_fraction);
BlockGrid partition_template(const GrayImage& image, int block_size, double crop_fraction);

enum class Method { full, full_fast, diag, diag_fast, stream };

std::string_view to_string(Method method) noexcept;
/// Accepts "full", "full-fast", "diag", "diag-fast", "stream".
Method parse_method(std::string_view name);

/// ±block_size/8 on both axes.
ShiftRange default_search_range(int block_size);

enum class BlockStatus { valid, interpolated, invalid };
std::string_view to_string(BlockStatus status) noexcept;

struct BlockDisparity {
  double du = 0.0;
  double dv = 0.0;
  double coeff = 0.0;  ///< NaN unless valid
  BlockStatus status = BlockStatus::invalid;
};

struct DisparityField {
  int rows = 0;
  int cols = 0;
  std::vector<BlockDisparity> blocks;  ///< row-major

  const BlockDisparity& at(int row, int col) const noexcept {
    return blocks[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(col)];
  }
  BlockDisparity& at(int row, int col) noexcept {
    return blocks[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(col)];
  }
  std::size_t count(BlockStatus status) const noexcept;
};

struct AlignOptions {
  Method method = Method::diag_fast;
  ShiftRange range = ShiftRange::symmetric(8);
  DiagOrientation orientation = DiagOrientation::main;
  /// Streaming filter; unset means boxcar with window = block size.
  std::optional<MovingAverageConfig> moving_average;
  NoiseModel noise;
  /// Worker threads for block evaluation; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Runs the selected correlator on every block and keeps its best shift.
/// Blocks without a valid shift are marked invalid. When `counts` is given the
/// instrumented numerator kernels are used (fast methods only) and the per-block
/// tallies are summed into it.
DisparityField estimate_disparity(const GrayImage& template_image, const GrayImage& reference,
                                  const BlockGrid& grid, const AlignOptions& options,
                                  OpCounts* counts = nullptr);

/// Replaces invalid blocks by the mean of their valid 8-neighbours, one
/// simultaneous pass at a time until every block is filled. Throws
/// UnalignableError when no block is valid.
DisparityField fill_invalid(DisparityField field);

struct DenseDisparity {
  int width = 0;
  int height = 0;
  std::vector<double> du;
  std::vector<double> dv;

  double du_at(int x, int y) const noexcept {
    return du[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
              static_cast<std::size_t>(x)];
  }
  double dv_at(int x, int y) const noexcept {
    return dv[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
              static_cast<std::size_t>(x)];
  }
};

/// Bilinear interpolation between block centres; constant extrapolation
/// outside the lattice of centres. Invalid blocks must have been filled.
DenseDisparity interpolate_disparity(const DisparityField& field, const BlockGrid& grid,
                                     int width, int height);

struct WarpResult {
  GrayImage image;
  ImageMask mask;
};

/// output(x, y) = template(x - du(x,y), y - dv(x,y)), bilinear. Samples
/// outside the template are zero and masked out.
WarpResult warp(const GrayImage& template_image, const DenseDisparity& dense);

/// Pearson correlation over the masked pixels.
double global_correlation(const GrayImage& a, const GrayImage& b, const ImageMask& mask);
double global_correlation(const GrayImage& a, const GrayImage& b);

/// 100 * (after - before) / before
double improvement_percent(double before, double after);

GrayImage scale_intensity(const GrayImage& image, double factor);

/// Per-pixel multiplicative factor uniform in [1 - amplitude, 1 + amplitude],
/// result clamped below at zero.
GrayImage random_intensity_perturbation(const GrayImage& image, std::uint64_t seed,
                                        double amplitude);

/// Fraction of blocks whose valid disparity equals the ground truth at the
/// block centre.
double block_match_rate(const DisparityField& field, const BlockGrid& grid,
                        const GroundTruth& truth);

}  // namespace nccalign
