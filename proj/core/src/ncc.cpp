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

#include "nccalign/ncc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "nccalign/errors.hpp"
#include "op_counter.hpp"

namespace nccalign {

void ShiftRange::validate() const {
  if (du_min > du_max || dv_min > dv_max) {
    throw ArgumentError("invalid shift range du " + std::to_string(du_min) + ":" +
                        std::to_string(du_max) + " dv " + std::to_string(dv_min) + ":" +
                        std::to_string(dv_max));
  }
}

CorrelationMap::CorrelationMap(ShiftRange range) : range_(range) {
  range_.validate();
  values_.assign(range_.count(), std::numeric_limits<double>::quiet_NaN());
  status_.assign(range_.count(), ShiftStatus::out_of_bounds);
  clamped_.assign(range_.count(), 0);
}

void CorrelationMap::set_flag(std::size_t i, ShiftStatus s) noexcept {
  values_[i] = std::numeric_limits<double>::quiet_NaN();
  status_[i] = s;
}

std::size_t CorrelationMap::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), ShiftStatus::valid));
}

std::size_t CorrelationMap::clamped_count() const noexcept {
  return static_cast<std::size_t>(std::count(clamped_.begin(), clamped_.end(), 1));
}

BlockStats block_stats(std::span<const double> samples) {
  BlockStats s;
  if (samples.empty()) return s;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
           static_cast<double>(samples.size());
  for (double v : samples) s.variance_sum += (v - s.mean) * (v - s.mean);
  return s;
}

BlockStats block_stats(const GrayImage& block) { return block_stats(block.pixels()); }

// ---------------------------------------------------------------------------
// SumTables

SumTables::SumTables(const GrayImage& image) : width_(image.width()), height_(image.height()) {
  const auto pixels = image.pixels();
  pivot_ = std::accumulate(pixels.begin(), pixels.end(), 0.0) / static_cast<double>(pixels.size());

  const std::size_t stride = static_cast<std::size_t>(width_) + 1;
  sum_.assign(stride * (static_cast<std::size_t>(height_) + 1), 0.0);
  sumsq_.assign(sum_.size(), 0.0);
  for (int y = 0; y < height_; ++y) {
    double row_sum = 0.0;
    double row_sumsq = 0.0;
    const auto row = image.row(y);
    for (int x = 0; x < width_; ++x) {
      const double c = row[static_cast<std::size_t>(x)] - pivot_;
      row_sum += c;
      row_sumsq += c * c;
      const std::size_t here = (static_cast<std::size_t>(y) + 1) * stride + x + 1;
      sum_[here] = sum_[here - stride] + row_sum;
      sumsq_[here] = sumsq_[here - stride] + row_sumsq;
    }
  }
}

double SumTables::centered_sum(int x, int y, int w, int h) const noexcept {
  return at(sum_, x + w, y + h) - at(sum_, x, y + h) - at(sum_, x + w, y) + at(sum_, x, y);
}

double SumTables::centered_sumsq(int x, int y, int w, int h) const noexcept {
  return at(sumsq_, x + w, y + h) - at(sumsq_, x, y + h) - at(sumsq_, x + w, y) +
         at(sumsq_, x, y);
}

double SumTables::window_sum(int x, int y, int w, int h) const noexcept {
  return centered_sum(x, y, w, h) + pivot_ * w * h;
}

double SumTables::window_sumsq(int x, int y, int w, int h) const noexcept {
  const double n = static_cast<double>(w) * h;
  return centered_sumsq(x, y, w, h) + 2.0 * pivot_ * centered_sum(x, y, w, h) +
         n * pivot_ * pivot_;
}

BlockStats SumTables::window_stats(int x, int y, int w, int h) const noexcept {
  const double n = static_cast<double>(w) * h;
  const double cs = centered_sum(x, y, w, h);
  BlockStats s;
  s.mean = pivot_ + cs / n;
  s.variance_sum = std::max(0.0, centered_sumsq(x, y, w, h) - cs * cs / n);
  return s;
}

double SumTables::running_sum(int x, int y) const noexcept { return window_sum(0, 0, x + 1, y + 1); }

double SumTables::running_sumsq(int x, int y) const noexcept {
  return window_sumsq(0, 0, x + 1, y + 1);
}

SumTables build_sum_tables(const GrayImage& image) { return SumTables(image); }

// ---------------------------------------------------------------------------
// Full 2D NCC

namespace detail {

void check_block_args(const GrayImage& template_block, const GrayImage& reference,
                      const ShiftRange& range) {
  if (template_block.empty() || reference.empty()) {
    throw ArgumentError("empty template block or reference");
  }
  if (template_block.width() > reference.width() ||
      template_block.height() > reference.height()) {
    throw ArgumentError("template block " + std::to_string(template_block.width()) + "x" +
                        std::to_string(template_block.height()) + " larger than reference " +
                        std::to_string(reference.width()) + "x" +
                        std::to_string(reference.height()));
  }
  range.validate();
}

}  // namespace detail

CorrelationMap ncc_full_naive(const GrayImage& template_block, const GrayImage& reference,
                              PixelCoord origin, const ShiftRange& range) {
  detail::check_block_args(template_block, reference, range);
  const int tw = template_block.width();
  const int th = template_block.height();
  const double n = static_cast<double>(tw) * th;

  double t_mean = 0.0;
  for (double v : template_block.pixels()) t_mean += v;
  t_mean /= n;

  CorrelationMap map(range);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int rx = origin.x + map.du_at(i);
    const int ry = origin.y + map.dv_at(i);
    if (!detail::window_in_bounds(reference, rx, ry, tw, th)) {
      map.set_flag(i, ShiftStatus::out_of_bounds);
      continue;
    }
    double r_mean = 0.0;
    for (int y = 0; y < th; ++y) {
      for (int x = 0; x < tw; ++x) r_mean += reference(rx + x, ry + y);
    }
    r_mean /= n;

    double num = 0.0;
    double var_r = 0.0;
    double var_t = 0.0;
    for (int y = 0; y < th; ++y) {
      for (int x = 0; x < tw; ++x) {
        const double dr = reference(rx + x, ry + y) - r_mean;
        const double dt = template_block(x, y) - t_mean;
        num += dr * dt;
        var_r += dr * dr;
        var_t += dt * dt;
      }
    }
    if (var_r < kVarianceEpsilon || var_t < kVarianceEpsilon) {
      map.set_flag(i, ShiftStatus::zero_variance);
      continue;
    }
    map.set_valid(i, num / std::sqrt(var_r * var_t));
  }
  return map;
}

namespace {

template <class Counter>
CorrelationMap full_fast_impl(const GrayImage& template_block, const GrayImage& reference,
                              PixelCoord origin, const ShiftRange& range,
                              const SumTables& tables, Counter counter) {
  detail::check_block_args(template_block, reference, range);
  if (tables.width() != reference.width() || tables.height() != reference.height()) {
    throw ArgumentError("sum tables do not match reference dimensions");
  }
  const int tw = template_block.width();
  const int th = template_block.height();

  const BlockStats t_stats = block_stats(template_block);
  std::vector<double> centered(template_block.pixels().begin(), template_block.pixels().end());
  for (double& v : centered) v -= t_stats.mean;

  CorrelationMap map(range);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int rx = origin.x + map.du_at(i);
    const int ry = origin.y + map.dv_at(i);
    if (!detail::window_in_bounds(reference, rx, ry, tw, th)) {
      map.set_flag(i, ShiftStatus::out_of_bounds);
      continue;
    }
    const double var_r = tables.window_stats(rx, ry, tw, th).variance_sum;
    if (var_r < kVarianceEpsilon || t_stats.variance_sum < kVarianceEpsilon) {
      map.set_flag(i, ShiftStatus::zero_variance);
      continue;
    }
    counter.shift();
    double num = 0.0;
    const double* t = centered.data();
    for (int y = 0; y < th; ++y) {
      const double* r = reference.row(ry + y).data() + rx;
      for (int x = 0; x < tw; ++x) {
        num += r[x] * t[x];
        counter.mul();
        counter.add();
      }
      t += tw;
    }
    map.set_valid(i, num / std::sqrt(var_r * t_stats.variance_sum));
  }
  return map;
}

}  // namespace

CorrelationMap ncc_full_fast(const GrayImage& template_block, const GrayImage& reference,
                             PixelCoord origin, const ShiftRange& range,
                             const SumTables& tables, OpCounts* counts) {
  if (counts != nullptr) {
    return full_fast_impl(template_block, reference, origin, range, tables,
                          detail::TallyCounter{counts});
  }
  return full_fast_impl(template_block, reference, origin, range, tables, detail::NullCounter{});
}

std::optional<ShiftMatch> best_shift(const CorrelationMap& map) {
  std::optional<ShiftMatch> best;
  auto key = [](const ShiftMatch& m) {
    return std::make_tuple(m.du * m.du + m.dv * m.dv, m.dv, m.du);
  };
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map.statuses()[i] != ShiftStatus::valid) continue;
    const ShiftMatch cand{map.du_at(i), map.dv_at(i), map.values()[i]};
    if (!best || cand.coeff > best->coeff ||
        (cand.coeff == best->coeff && key(cand) < key(*best))) {
      best = cand;
    }
  }
  return best;
}

}  // namespace nccalign
