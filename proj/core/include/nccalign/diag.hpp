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

#include <vector>

#include "nccalign/image.hpp"
#include "nccalign/ncc.hpp"

namespace nccalign {

/// Main: top-left to bottom-right. Anti: bottom-left to top-right.
enum class DiagOrientation { main, anti };

struct DiagVector {
  std::vector<double> samples;
  DiagOrientation orientation = DiagOrientation::main;
};

/// main: samples[k] = block(row k, col k)
/// anti: samples[k] = block(row D-1-k, col k)
/// Throws ArgumentError for non-square blocks or D < 2.
DiagVector extract_diagonal(const GrayImage& block, DiagOrientation orientation);

/// Coordinates of diagonal sample k of the D x D window with top-left (x, y).
inline PixelCoord diagonal_sample(int x, int y, int side, int k,
                                  DiagOrientation orientation) noexcept {
  return orientation == DiagOrientation::main ? PixelCoord{x + k, y + k}
                                              : PixelCoord{x + k, y + side - 1 - k};
}

/// Prefix sums along both 45° directions.
///
///   main(x, y) = r(x, y) + main(x-1, y-1)
///   anti(x, y) = r(x, y) + anti(x+1, y-1)
///
/// with out-of-image terms zero. A run of D diagonal samples then costs two
/// lookups per table. Like SumTables, storage is pivot-centered.
class DiagTables {
 public:
  DiagTables() = default;
  explicit DiagTables(const GrayImage& reference);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// Raw prefix values as defined above.
  double main_sum(int x, int y) const noexcept;
  double anti_sum(int x, int y) const noexcept;

  /// Sum / statistics of the D samples of the D x D window at (x, y).
  double window_sum(int x, int y, int side, DiagOrientation orientation) const noexcept;
  double window_sumsq(int x, int y, int side, DiagOrientation orientation) const noexcept;
  BlockStats window_stats(int x, int y, int side, DiagOrientation orientation) const noexcept;

 private:
  struct Centered {
    double sum;
    double sumsq;
  };
  Centered centered(int x, int y, int side, DiagOrientation orientation) const noexcept;

  // main tables are indexed (x+1, y+1); anti tables (x, y+1). Both have
  // stride width+1 and height+1 rows; the padding row/column stays zero.
  std::size_t idx(int col, int row) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_ + 1) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  double pivot_ = 0.0;
  std::vector<double> main_sum_, main_sumsq_;
  std::vector<double> anti_sum_, anti_sumsq_;
};

DiagTables build_diag_tables(const GrayImage& reference);

/// NCC over the D diagonal samples of the template block and of each shifted
/// reference window. Means and variance sums use only those D samples.
CorrelationMap ncc_diag(const GrayImage& template_block, const GrayImage& reference,
                        PixelCoord origin, const ShiftRange& range,
                        DiagOrientation orientation = DiagOrientation::main);

/// ncc_diag with reference statistics from DiagTables: D multiplies for the
/// numerator plus O(1) lookups per shift.
CorrelationMap ncc_diag_fast(const GrayImage& template_block, const GrayImage& reference,
                             PixelCoord origin, const ShiftRange& range,
                             DiagOrientation orientation, const DiagTables& tables,
                             OpCounts* counts = nullptr);

namespace detail {
void check_square(const GrayImage& block);
}  // namespace detail

}  // namespace nccalign
