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

#include "nccalign/stream.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nccalign/errors.hpp"

namespace nccalign {

void MovingAverageConfig::validate() const {
  if (kind == AverageKind::boxcar && window_len < 1) {
    throw ArgumentError("boxcar window length must be at least 1");
  }
  if (kind == AverageKind::single_pole && !(alpha > 0.0 && alpha <= 1.0)) {
    throw ArgumentError("single-pole alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

BoxcarAverage::BoxcarAverage(std::size_t len) : ring_(len, 0.0) {
  if (len < 1) throw ArgumentError("boxcar window length must be at least 1");
}

double BoxcarAverage::update(double x) {
  if (filled_ == ring_.size()) {
    state_ -= ring_[next_];
  } else {
    ++filled_;
  }
  ring_[next_] = x;
  state_ += x;
  next_ = (next_ + 1) % ring_.size();
  return state_ / static_cast<double>(filled_);
}

double SinglePoleAverage::update(double x) {
  if (!primed_) {
    state_ = x;
    primed_ = true;
  }
  state_ = alpha_ * x + (1.0 - alpha_) * state_;
  return state_;
}

std::vector<double> moving_average(std::span<const double> signal,
                                   const MovingAverageConfig& config) {
  if (signal.empty()) throw ArgumentError("moving_average: empty signal");
  config.validate();
  std::vector<double> out;
  out.reserve(signal.size());
  if (config.kind == AverageKind::boxcar) {
    BoxcarAverage filter(config.window_len);
    for (double x : signal) out.push_back(filter.update(x));
  } else {
    SinglePoleAverage filter(config.alpha);
    for (double x : signal) out.push_back(filter.update(x));
  }
  return out;
}

std::vector<double> zero_mean_stream(std::span<const double> signal,
                                     const MovingAverageConfig& config) {
  std::vector<double> out = moving_average(signal, config);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = signal[n] - out[n];
  return out;
}

double rms(std::span<const double> signal) {
  if (signal.empty()) throw ArgumentError("rms: empty signal");
  double acc = 0.0;
  for (double v : signal) acc += v * v;
  return std::sqrt(acc / static_cast<double>(signal.size()));
}

// ---------------------------------------------------------------------------
// Noise

void NoiseModel::validate() const {
  if (!std::isfinite(multiplier_fraction) || !std::isfinite(integrator_fraction) ||
      multiplier_fraction < 0.0 || integrator_fraction < 0.0) {
    throw ArgumentError("noise fractions must be finite and non-negative");
  }
}

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id, NoiseStage stage)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(stream_id + 2 * kGolden) ^
                 mix64(static_cast<std::uint64_t>(stage) + 3 * kGolden))) {}

CounterRng::result_type CounterRng::operator()() noexcept {
  return mix64(key_ + (++counter_) * kGolden);
}

double multiply_integrate(std::span<const double> a, std::span<const double> b,
                          const NoiseModel& noise, double rms_a, double rms_b,
                          std::uint64_t stream_id) {
  if (a.size() != b.size()) {
    throw ArgumentError("multiply_integrate: length mismatch " + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()));
  }
  if (rms_a < 0.0 || rms_b < 0.0) {
    throw ArgumentError("multiply_integrate: negative rms");
  }
  const double rms_p = rms_a * rms_b;
  const double mult_sigma = noise.multiplier_fraction * rms_p;

  double acc = 0.0;
  if (mult_sigma > 0.0) {
    CounterRng rng(noise.seed, stream_id, NoiseStage::multiplier);
    std::normal_distribution<double> gauss;
    const double shared = noise.cadence == NoiseCadence::per_window ? gauss(rng) : 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const double g = noise.cadence == NoiseCadence::per_window ? shared : gauss(rng);
      acc += a[n] * b[n] + g * mult_sigma;
    }
  } else {
    for (std::size_t n = 0; n < a.size(); ++n) acc += a[n] * b[n];
  }

  const double int_sigma =
      noise.integrator_fraction * rms_p * std::sqrt(static_cast<double>(a.size()));
  if (int_sigma > 0.0) {
    CounterRng rng(noise.seed, stream_id, NoiseStage::integrator);
    std::normal_distribution<double> gauss;
    acc += gauss(rng) * int_sigma;
  }
  return acc;
}

double dynamic_range_to_noise(double db) {
  if (!std::isfinite(db)) throw ArgumentError("dynamic range must be finite");
  return std::pow(10.0, -db / 20.0);
}

// ---------------------------------------------------------------------------
// Streaming diagonal NCC

CorrelationMap ncc_stream(const GrayImage& template_block, const GrayImage& reference,
                          PixelCoord origin, const ShiftRange& range,
                          DiagOrientation orientation, const MovingAverageConfig& ma,
                          const NoiseModel& noise, const DiagTables& tables,
                          std::uint64_t block_id) {
  detail::check_square(template_block);
  detail::check_block_args(template_block, reference, range);
  if (tables.width() != reference.width() || tables.height() != reference.height()) {
    throw ArgumentError("diagonal tables do not match reference dimensions");
  }
  ma.validate();
  noise.validate();

  const int side = template_block.width();
  const DiagVector t = extract_diagonal(template_block, orientation);
  const double var_t = block_stats(t.samples).variance_sum;
  const std::vector<double> zt = zero_mean_stream(t.samples, ma);
  const double rms_t = rms(zt);

  std::vector<double> r(static_cast<std::size_t>(side));
  CorrelationMap map(range);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int rx = origin.x + map.du_at(i);
    const int ry = origin.y + map.dv_at(i);
    if (!detail::window_in_bounds(reference, rx, ry, side, side)) {
      map.set_flag(i, ShiftStatus::out_of_bounds);
      continue;
    }
    const double var_r = tables.window_stats(rx, ry, side, orientation).variance_sum;
    for (int k = 0; k < side; ++k) {
      const PixelCoord p = diagonal_sample(rx, ry, side, k, orientation);
      r[static_cast<std::size_t>(k)] = reference(p.x, p.y);
    }
    const std::vector<double> zr = zero_mean_stream(r, ma);
    const double rms_r = rms(zr);
    const double n = static_cast<double>(side);
    if (var_t < kVarianceEpsilon || var_r < kVarianceEpsilon ||
        rms_t * rms_t * n < kVarianceEpsilon || rms_r * rms_r * n < kVarianceEpsilon) {
      map.set_flag(i, ShiftStatus::zero_variance);
      continue;
    }
    const std::uint64_t stream_id = block_id * range.count() + i;
    const double num = multiply_integrate(zt, zr, noise, rms_t, rms_r, stream_id);
    const double c = num / std::sqrt(var_t * var_r);
    map.set_valid(i, std::clamp(c, -1.0, 1.0));
    if (c > 1.0 || c < -1.0) map.mark_clamped(i);
  }
  return map;
}

CorrelationMap ncc_stream(const GrayImage& template_block, const GrayImage& reference,
                          PixelCoord origin, const ShiftRange& range,
                          DiagOrientation orientation, const MovingAverageConfig& ma,
                          const NoiseModel& noise, std::uint64_t block_id) {
  return ncc_stream(template_block, reference, origin, range, orientation, ma, noise,
                    DiagTables(reference), block_id);
}

}  // namespace nccalign
