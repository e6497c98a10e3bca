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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nccalign/image.hpp"

namespace nccalign {

/// Variance sums below this are treated as zero (normalized intensities).
inline constexpr double kVarianceEpsilon = 1e-12;

/// Inclusive horizontal (du) and vertical (dv) search range.
struct ShiftRange {
  int du_min = 0;
  int du_max = 0;
  int dv_min = 0;
  int dv_max = 0;

  static ShiftRange symmetric(int radius) { return {-radius, radius, -radius, radius}; }
  static ShiftRange symmetric(int du_radius, int dv_radius) {
    return {-du_radius, du_radius, -dv_radius, dv_radius};
  }

  int du_count() const noexcept { return du_max - du_min + 1; }
  int dv_count() const noexcept { return dv_max - dv_min + 1; }
  std::size_t count() const noexcept {
    return static_cast<std::size_t>(du_count()) * static_cast<std::size_t>(dv_count());
  }
  bool contains(int du, int dv) const noexcept {
    return du >= du_min && du <= du_max && dv >= dv_min && dv <= dv_max;
  }
  /// Throws ArgumentError when min > max on either axis.
  void validate() const;

  friend bool operator==(const ShiftRange&, const ShiftRange&) = default;
};

enum class ShiftStatus : std::uint8_t { valid, zero_variance, out_of_bounds };

/// C(u,v) over a ShiftRange, stored dv-major (row = dv, column = du).
/// Non-valid entries hold NaN.
class CorrelationMap {
 public:
  CorrelationMap() = default;
  explicit CorrelationMap(ShiftRange range);

  const ShiftRange& range() const noexcept { return range_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(int du, int dv) const noexcept {
    return static_cast<std::size_t>(dv - range_.dv_min) *
               static_cast<std::size_t>(range_.du_count()) +
           static_cast<std::size_t>(du - range_.du_min);
  }
  int du_at(std::size_t i) const noexcept {
    return range_.du_min + static_cast<int>(i % static_cast<std::size_t>(range_.du_count()));
  }
  int dv_at(std::size_t i) const noexcept {
    return range_.dv_min + static_cast<int>(i / static_cast<std::size_t>(range_.du_count()));
  }

  double value(int du, int dv) const noexcept { return values_[index(du, dv)]; }
  ShiftStatus status(int du, int dv) const noexcept { return status_[index(du, dv)]; }
  /// True when a streamed coefficient left [-1,1] and was clamped.
  bool clamped(int du, int dv) const noexcept { return clamped_[index(du, dv)] != 0; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const ShiftStatus> statuses() const noexcept { return status_; }

  void set_valid(std::size_t i, double c) noexcept {
    values_[i] = c;
    status_[i] = ShiftStatus::valid;
  }
  void set_flag(std::size_t i, ShiftStatus s) noexcept;
  void mark_clamped(std::size_t i) noexcept { clamped_[i] = 1; }

  std::size_t valid_count() const noexcept;
  std::size_t clamped_count() const noexcept;

 private:
  ShiftRange range_;
  std::vector<double> values_;
  std::vector<ShiftStatus> status_;
  std::vector<std::uint8_t> clamped_;
};

/// Mean and Σ(x - mean)² of a sample set.
struct BlockStats {
  double mean = 0.0;
  double variance_sum = 0.0;
};

BlockStats block_stats(std::span<const double> samples);
BlockStats block_stats(const GrayImage& block);

/// Multiply/add tally of the correlation numerator. Only the instrumented
/// code paths (non-null OpCounts argument) touch it.
struct OpCounts {
  std::uint64_t multiplies = 0;
  std::uint64_t additions = 0;
  std::uint64_t shifts = 0;

  OpCounts& operator+=(const OpCounts& o) noexcept {
    multiplies += o.multiplies;
    additions += o.additions;
    shifts += o.shifts;
    return *this;
  }
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Integral images of r and r² for O(1) window statistics.
///
/// Entries accumulate (r - pivot) with pivot = image mean, which keeps the
/// sumsq - sum²/N cancellation small on large images; the public accessors
/// return sums of the raw intensities.
class SumTables {
 public:
  SumTables() = default;
  explicit SumTables(const GrayImage& image);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// Σ r over [0..x] x [0..y].
  double running_sum(int x, int y) const noexcept;
  /// Σ r² over [0..x] x [0..y].
  double running_sumsq(int x, int y) const noexcept;

  /// Sum over the w x h window with top-left (x, y); four lookups.
  double window_sum(int x, int y, int w, int h) const noexcept;
  double window_sumsq(int x, int y, int w, int h) const noexcept;
  /// Window mean and Σ(r - mean)², clamped at zero.
  BlockStats window_stats(int x, int y, int w, int h) const noexcept;

 private:
  double centered_sum(int x, int y, int w, int h) const noexcept;
  double centered_sumsq(int x, int y, int w, int h) const noexcept;
  double at(const std::vector<double>& t, int x, int y) const noexcept {
    return t[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_ + 1) +
             static_cast<std::size_t>(x)];
  }

  int width_ = 0;
  int height_ = 0;
  double pivot_ = 0.0;
  std::vector<double> sum_;    // (width+1) x (height+1), zero first row/column
  std::vector<double> sumsq_;
};

SumTables build_sum_tables(const GrayImage& image);

/// Normalized cross correlation computed directly: for every
/// shift the reference window at origin + (du, dv) is re-centered and all
/// three sums are accumulated explicitly.
CorrelationMap ncc_full_naive(const GrayImage& template_block, const GrayImage& reference,
                              PixelCoord origin, const ShiftRange& range);

/// Same contract as ncc_full_naive. Reference statistics come from `tables`
/// and the numerator is Σ r·(t - t̄).
CorrelationMap ncc_full_fast(const GrayImage& template_block, const GrayImage& reference,
                             PixelCoord origin, const ShiftRange& range,
                             const SumTables& tables, OpCounts* counts = nullptr);

struct ShiftMatch {
  int du = 0;
  int dv = 0;
  double coeff = 0.0;
};

/// Valid shift with the largest coefficient. Ties prefer the smaller
/// du² + dv², then the smaller dv, then the smaller du. Empty when no shift
/// is valid.
std::optional<ShiftMatch> best_shift(const CorrelationMap& map);

namespace detail {

/// Shared argument checks for block correlators.
void check_block_args(const GrayImage& template_block, const GrayImage& reference,
                      const ShiftRange& range);

inline bool window_in_bounds(const GrayImage& reference, int x, int y, int w, int h) noexcept {
  return x >= 0 && y >= 0 && x + w <= reference.width() && y + h <= reference.height();
}

}  // namespace detail

}  // namespace nccalign
