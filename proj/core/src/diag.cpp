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

#include "nccalign/diag.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>

#include "nccalign/errors.hpp"
#include "op_counter.hpp"

namespace nccalign {

namespace detail {

void check_square(const GrayImage& block) {
  if (block.width() != block.height()) {
    throw ArgumentError("diagonal NCC needs a square block, got " +
                        std::to_string(block.width()) + "x" + std::to_string(block.height()));
  }
  if (block.width() < 2) {
    throw ArgumentError("diagonal NCC needs a block side of at least 2");
  }
}

}  // namespace detail

DiagVector extract_diagonal(const GrayImage& block, DiagOrientation orientation) {
  detail::check_square(block);
  const int side = block.width();
  DiagVector out;
  out.orientation = orientation;
  out.samples.reserve(static_cast<std::size_t>(side));
  for (int k = 0; k < side; ++k) {
    const PixelCoord p = diagonal_sample(0, 0, side, k, orientation);
    out.samples.push_back(block(p.x, p.y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// DiagTables

DiagTables::DiagTables(const GrayImage& reference)
    : width_(reference.width()), height_(reference.height()) {
  const auto pixels = reference.pixels();
  pivot_ = std::accumulate(pixels.begin(), pixels.end(), 0.0) / static_cast<double>(pixels.size());

  const std::size_t cells = static_cast<std::size_t>(width_ + 1) * (height_ + 1);
  main_sum_.assign(cells, 0.0);
  main_sumsq_.assign(cells, 0.0);
  anti_sum_.assign(cells, 0.0);
  anti_sumsq_.assign(cells, 0.0);

  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const double c = reference(x, y) - pivot_;
      const std::size_t m = idx(x + 1, y + 1);
      const std::size_t m_prev = idx(x, y);
      main_sum_[m] = c + main_sum_[m_prev];
      main_sumsq_[m] = c * c + main_sumsq_[m_prev];

      const std::size_t a = idx(x, y + 1);
      const std::size_t a_prev = idx(x + 1, y);
      anti_sum_[a] = c + anti_sum_[a_prev];
      anti_sumsq_[a] = c * c + anti_sumsq_[a_prev];
    }
  }
}

double DiagTables::main_sum(int x, int y) const noexcept {
  if (x < 0 || y < 0) return 0.0;
  const int count = std::min(x, y) + 1;
  return main_sum_[idx(x + 1, y + 1)] + pivot_ * count;
}

double DiagTables::anti_sum(int x, int y) const noexcept {
  if (x >= width_ || y < 0) return 0.0;
  const int count = std::min(width_ - 1 - x, y) + 1;
  return anti_sum_[idx(x, y + 1)] + pivot_ * count;
}

DiagTables::Centered DiagTables::centered(int x, int y, int side,
                                          DiagOrientation orientation) const noexcept {
  if (orientation == DiagOrientation::main) {
    const std::size_t end = idx(x + side, y + side);
    const std::size_t before = idx(x, y);
    return {main_sum_[end] - main_sum_[before], main_sumsq_[end] - main_sumsq_[before]};
  }
  const std::size_t end = idx(x, y + side);
  const std::size_t before = idx(x + side, y);
  return {anti_sum_[end] - anti_sum_[before], anti_sumsq_[end] - anti_sumsq_[before]};
}

double DiagTables::window_sum(int x, int y, int side, DiagOrientation orientation) const noexcept {
  return centered(x, y, side, orientation).sum + pivot_ * side;
}

double DiagTables::window_sumsq(int x, int y, int side,
                                DiagOrientation orientation) const noexcept {
  const Centered c = centered(x, y, side, orientation);
  return c.sumsq + 2.0 * pivot_ * c.sum + side * pivot_ * pivot_;
}

BlockStats DiagTables::window_stats(int x, int y, int side,
                                    DiagOrientation orientation) const noexcept {
  const Centered c = centered(x, y, side, orientation);
  BlockStats s;
  s.mean = pivot_ + c.sum / side;
  s.variance_sum = std::max(0.0, c.sumsq - c.sum * c.sum / side);
  return s;
}

DiagTables build_diag_tables(const GrayImage& reference) { return DiagTables(reference); }

// ---------------------------------------------------------------------------
// Diagonal NCC

CorrelationMap ncc_diag(const GrayImage& template_block, const GrayImage& reference,
                        PixelCoord origin, const ShiftRange& range, DiagOrientation orientation) {
  detail::check_square(template_block);
  detail::check_block_args(template_block, reference, range);
  const int side = template_block.width();
  const DiagVector t = extract_diagonal(template_block, orientation);
  const BlockStats t_stats = block_stats(t.samples);

  std::vector<double> r(static_cast<std::size_t>(side));
  CorrelationMap map(range);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int rx = origin.x + map.du_at(i);
    const int ry = origin.y + map.dv_at(i);
    if (!detail::window_in_bounds(reference, rx, ry, side, side)) {
      map.set_flag(i, ShiftStatus::out_of_bounds);
      continue;
    }
    for (int k = 0; k < side; ++k) {
      const PixelCoord p = diagonal_sample(rx, ry, side, k, orientation);
      r[static_cast<std::size_t>(k)] = reference(p.x, p.y);
    }
    const BlockStats r_stats = block_stats(r);
    if (r_stats.variance_sum < kVarianceEpsilon || t_stats.variance_sum < kVarianceEpsilon) {
      map.set_flag(i, ShiftStatus::zero_variance);
      continue;
    }
    double num = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      num += (r[k] - r_stats.mean) * (t.samples[k] - t_stats.mean);
    }
    map.set_valid(i, num / std::sqrt(r_stats.variance_sum * t_stats.variance_sum));
  }
  return map;
}

namespace {

template <class Counter>
CorrelationMap diag_fast_impl(const GrayImage& template_block, const GrayImage& reference,
                              PixelCoord origin, const ShiftRange& range,
                              DiagOrientation orientation, const DiagTables& tables,
                              Counter counter) {
  detail::check_square(template_block);
  detail::check_block_args(template_block, reference, range);
  if (tables.width() != reference.width() || tables.height() != reference.height()) {
    throw ArgumentError("diagonal tables do not match reference dimensions");
  }
  const int side = template_block.width();
  DiagVector t = extract_diagonal(template_block, orientation);
  const BlockStats t_stats = block_stats(t.samples);
  for (double& v : t.samples) v -= t_stats.mean;

  // Walk the reference diagonal with a fixed index stride.
  const std::ptrdiff_t w = reference.width();
  const std::ptrdiff_t step = orientation == DiagOrientation::main ? w + 1 : 1 - w;

  CorrelationMap map(range);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int rx = origin.x + map.du_at(i);
    const int ry = origin.y + map.dv_at(i);
    if (!detail::window_in_bounds(reference, rx, ry, side, side)) {
      map.set_flag(i, ShiftStatus::out_of_bounds);
      continue;
    }
    const double var_r = tables.window_stats(rx, ry, side, orientation).variance_sum;
    if (var_r < kVarianceEpsilon || t_stats.variance_sum < kVarianceEpsilon) {
      map.set_flag(i, ShiftStatus::zero_variance);
      continue;
    }
    counter.shift();
    const PixelCoord first = diagonal_sample(rx, ry, side, 0, orientation);
    const double* pixels = reference.pixels().data();
    std::ptrdiff_t at = static_cast<std::ptrdiff_t>(first.y) * w + first.x;
    double num = 0.0;
    for (int k = 0; k < side; ++k, at += step) {
      num += pixels[at] * t.samples[static_cast<std::size_t>(k)];
      counter.mul();
      counter.add();
    }
    map.set_valid(i, num / std::sqrt(var_r * t_stats.variance_sum));
  }
  return map;
}

}  // namespace

CorrelationMap ncc_diag_fast(const GrayImage& template_block, const GrayImage& reference,
                             PixelCoord origin, const ShiftRange& range,
                             DiagOrientation orientation, const DiagTables& tables,
                             OpCounts* counts) {
  if (counts != nullptr) {
    return diag_fast_impl(template_block, reference, origin, range, orientation, tables,
                          detail::TallyCounter{counts});
  }
  return diag_fast_impl(template_block, reference, origin, range, orientation, tables,
                        detail::NullCounter{});
}

}  // namespace nccalign
