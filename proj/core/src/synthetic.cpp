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

#include "nccalign/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "nccalign/errors.hpp"

namespace nccalign {
namespace {

constexpr int kBoxRadius = 2;  // 5x5 box blur

int region_index(int coord, int extent, int count) {
  // Largest i with floor(i * extent / count) <= coord.
  int i = static_cast<int>((static_cast<long long>(coord) * count) / extent);
  while (i + 1 < count && static_cast<long long>(i + 1) * extent / count <= coord) ++i;
  while (i > 0 && static_cast<long long>(i) * extent / count > coord) --i;
  return i;
}

std::vector<double> blurred_texture(int width, int height, std::uint64_t seed) {
  const int nw = width + 2 * kBoxRadius;
  const int nh = height + 2 * kBoxRadius;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> noise(static_cast<std::size_t>(nw) * static_cast<std::size_t>(nh));
  for (double& v : noise) v = uniform(rng);

  // Separable box filter, "valid" region only.
  const int k = 2 * kBoxRadius + 1;
  std::vector<double> horiz(static_cast<std::size_t>(width) * static_cast<std::size_t>(nh));
  for (int y = 0; y < nh; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += noise[static_cast<std::size_t>(y) * nw + x + i];
      horiz[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += horiz[static_cast<std::size_t>(y + i) * width + x];
      out[static_cast<std::size_t>(y) * width + x] = s;
    }
  }

  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double low = *lo;
  const double span = *hi - *lo;
  for (double& v : out) v = span > 0.0 ? (v - low) / span : 0.0;
  return out;
}

}  // namespace

GroundTruth::GroundTruth(int width, int height, int region_rows, int region_cols,
                         std::vector<RegionShift> shifts)
    : width_(width),
      height_(height),
      region_rows_(region_rows),
      region_cols_(region_cols),
      shifts_(std::move(shifts)) {
  if (width < 1 || height < 1 || region_rows < 1 || region_cols < 1 ||
      region_rows > height || region_cols > width) {
    throw SpecError("invalid region tiling " + std::to_string(region_rows) + "x" +
                    std::to_string(region_cols) + " over " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (shifts_.size() != static_cast<std::size_t>(region_rows) * region_cols) {
    throw SpecError("expected " + std::to_string(region_rows * region_cols) +
                    " region shifts, got " + std::to_string(shifts_.size()));
  }
}

RegionShift GroundTruth::at(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  const int r = region_index(y, height_, region_rows_);
  const int c = region_index(x, width_, region_cols_);
  return shifts_[static_cast<std::size_t>(r) * region_cols_ + c];
}

int GroundTruth::max_abs_shift() const noexcept {
  int m = 0;
  for (const auto& s : shifts_) m = std::max({m, std::abs(s.du), std::abs(s.dv)});
  return m;
}

int SyntheticSpec::shift_bound() const noexcept { return std::min(width, height) / 4; }

void SyntheticSpec::validate() const {
  if (width < 1 || height < 1) {
    throw SpecError("synthetic image dimensions must be positive");
  }
  if (region_rows < 1 || region_cols < 1 || region_rows > height || region_cols > width) {
    throw SpecError("invalid region grid " + std::to_string(region_rows) + "x" +
                    std::to_string(region_cols));
  }
  if (shifts.size() != static_cast<std::size_t>(region_rows) * region_cols) {
    throw SpecError("expected " + std::to_string(region_rows * region_cols) +
                    " region shifts, got " + std::to_string(shifts.size()));
  }
  const int bound = shift_bound();
  for (const auto& s : shifts) {
    if (std::abs(s.du) > bound || std::abs(s.dv) > bound) {
      throw SpecError("disparity (" + std::to_string(s.du) + "," + std::to_string(s.dv) +
                      ") exceeds bound " + std::to_string(bound));
    }
  }
  if (!std::isfinite(noise_floor) || noise_floor < 0.0) {
    throw SpecError("noise_floor must be finite and non-negative");
  }
}

SyntheticSpec SyntheticSpec::uniform(int width, int height, RegionShift shift,
                                     std::uint64_t seed, double noise_floor) {
  SyntheticSpec s;
  s.width = width;
  s.height = height;
  s.shifts = {shift};
  s.texture_seed = seed;
  s.noise_floor = noise_floor;
  return s;
}

SyntheticSpec SyntheticSpec::quadrants(int width, int height,
                                       const std::vector<RegionShift>& shifts,
                                       std::uint64_t seed, double noise_floor) {
  SyntheticSpec s;
  s.width = width;
  s.height = height;
  s.region_rows = 2;
  s.region_cols = 2;
  s.shifts = shifts;
  s.texture_seed = seed;
  s.noise_floor = noise_floor;
  return s;
}

SyntheticPair make_synthetic_stereo(const SyntheticSpec& spec) {
  spec.validate();
  const int pad = spec.shift_bound();
  const int tw = spec.width + 2 * pad;
  const int th = spec.height + 2 * pad;
  const std::vector<double> texture = blurred_texture(tw, th, spec.texture_seed);
  auto tex = [&](int x, int y) {
    return texture[static_cast<std::size_t>(y + pad) * tw + static_cast<std::size_t>(x + pad)];
  };

  SyntheticPair pair{GrayImage(spec.width, spec.height), GrayImage(spec.width, spec.height),
                     GroundTruth(spec.width, spec.height, spec.region_rows, spec.region_cols,
                                 spec.shifts)};

  // Template noise uses its own stream so the texture is independent of it.
  std::mt19937_64 noise_rng(spec.texture_seed ^ 0x9E3779B97F4A7C15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      pair.reference(x, y) = tex(x, y);
      const RegionShift s = pair.truth.at(x, y);
      double v = tex(x + s.du, y + s.dv);
      if (spec.noise_floor > 0.0) {
        v = std::clamp(v + spec.noise_floor * gauss(noise_rng), 0.0, 1.0);
      }
      pair.template_image(x, y) = v;
    }
  }
  return pair;
}

}  // namespace nccalign
