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
#include <vector>

#include "nccalign/image.hpp"

namespace nccalign {

struct RegionShift {
  int du = 0;
  int dv = 0;

  friend bool operator==(const RegionShift&, const RegionShift&) = default;
};

/// Piecewise-constant disparity over a region_rows x region_cols tiling of the
/// image. Region boundaries fall at floor(i * extent / count).
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(int width, int height, int region_rows, int region_cols,
              std::vector<RegionShift> shifts);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int region_rows() const noexcept { return region_rows_; }
  int region_cols() const noexcept { return region_cols_; }
  const std::vector<RegionShift>& shifts() const noexcept { return shifts_; }

  /// Shift of the region containing template pixel (x, y).
  RegionShift at(int x, int y) const;
  int max_abs_shift() const noexcept;

 private:
  int width_ = 0;
  int height_ = 0;
  int region_rows_ = 1;
  int region_cols_ = 1;
  std::vector<RegionShift> shifts_;
};

struct SyntheticSpec {
  int width = 512;
  int height = 512;
  int region_rows = 1;
  int region_cols = 1;
  /// Row-major, one entry per region.
  std::vector<RegionShift> shifts{RegionShift{}};
  std::uint64_t texture_seed = 7;
  /// Standard deviation of the Gaussian perturbation added to the template.
  double noise_floor = 0.0;

  /// Largest admissible |du| or |dv|: min(width, height) / 4.
  int shift_bound() const noexcept;
  /// Throws SpecError when an invariant is violated.
  void validate() const;

  static SyntheticSpec uniform(int width, int height, RegionShift shift,
                               std::uint64_t seed = 7, double noise_floor = 0.0);
  static SyntheticSpec quadrants(int width, int height, const std::vector<RegionShift>& shifts,
                                 std::uint64_t seed = 7, double noise_floor = 0.0);
};

struct SyntheticPair {
  GrayImage template_image;
  GrayImage reference;
  GroundTruth truth;
};

/// Reference = box-blurred seeded noise rescaled to [0,1]. Template(x,y) =
/// texture at reference coordinates (x+du, y+dv) of the region containing
/// (x,y), plus Gaussian noise of std noise_floor, clamped to [0,1]. The
/// texture is generated with a margin of shift_bound() pixels so the template
/// is defined everywhere. Pure function of the spec.
SyntheticPair make_synthetic_stereo(const SyntheticSpec& spec);

}  // namespace nccalign
