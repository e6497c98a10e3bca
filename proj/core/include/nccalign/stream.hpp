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
#include <limits>
#include <span>
#include <vector>

#include "nccalign/diag.hpp"
#include "nccalign/image.hpp"
#include "nccalign/ncc.hpp"

namespace nccalign {

// ---------------------------------------------------------------------------
// Moving averages

enum class AverageKind { boxcar, single_pole };

struct MovingAverageConfig {
  AverageKind kind = AverageKind::boxcar;
  std::size_t window_len = 1;  // boxcar
  double alpha = 0.5;          // single pole, in (0, 1]

  static MovingAverageConfig boxcar(std::size_t len) { return {AverageKind::boxcar, len, 0.5}; }
  static MovingAverageConfig single_pole(double a) { return {AverageKind::single_pole, 1, a}; }

  void validate() const;
};

/// Causal boxcar mean over the last `len` samples; the window grows from one
/// sample during warm-up.
class BoxcarAverage {
 public:
  explicit BoxcarAverage(std::size_t len);

  double update(double x);

 private:
  std::vector<double> ring_;
  std::size_t next_ = 0;
  std::size_t filled_ = 0;
  double state_ = 0.0;
};

/// y[n] = alpha * x[n] + (1 - alpha) * y[n-1], seeded with y[-1] = x[0].
class SinglePoleAverage {
 public:
  explicit SinglePoleAverage(double alpha) : alpha_(alpha) {}

  double update(double x);

 private:
  double alpha_;
  double state_ = 0.0;
  bool primed_ = false;
};

std::vector<double> moving_average(std::span<const double> signal,
                                   const MovingAverageConfig& config);

/// signal[n] - moving_average(signal)[n]
std::vector<double> zero_mean_stream(std::span<const double> signal,
                                     const MovingAverageConfig& config);

double rms(std::span<const double> signal);

// ---------------------------------------------------------------------------
// Analog noise model

enum class NoiseCadence {
  per_sample,  ///< fresh multiplier noise for every product
  per_window,  ///< one multiplier draw shared by the whole correlation window
};

struct NoiseModel {
  double multiplier_fraction = 0.0;  ///< of the product-stream RMS
  double integrator_fraction = 0.0;
  std::uint64_t seed = 0;
  NoiseCadence cadence = NoiseCadence::per_sample;

  bool noiseless() const noexcept {
    return multiplier_fraction == 0.0 && integrator_fraction == 0.0;
  }
  void validate() const;
};

enum class NoiseStage : std::uint64_t { multiplier = 1, integrator = 2 };

/// Counter-based 64-bit generator: output n of a stream is a pure function of
/// (key, n), so every (seed, stream, stage) triple owns an independent,
/// schedule-free sequence. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id, NoiseStage stage);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Streaming correlation: Σ (a[n]·b[n] + multiplier noise) + integrator noise.
/// Noise is Gaussian scaled by fraction · rms_a · rms_b; the integrator term is
/// added once at readout and carries an extra √N. With both fractions zero the
/// result is the exact dot product.
double multiply_integrate(std::span<const double> a, std::span<const double> b,
                          const NoiseModel& noise, double rms_a, double rms_b,
                          std::uint64_t stream_id);

/// 10^(-db/20)
double dynamic_range_to_noise(double db);

/// Diagonal NCC in the streaming form: both diagonals pass through
/// zero_mean_stream, the numerator is multiply_integrate of the two streams
/// (noise stream id = block_id * range.count() + shift index), and the
/// denominator is the exact diagonal variance product. Coefficients outside
/// [-1, 1] are clamped and flagged. Shifts whose zero-mean stream carries no
/// energy are flagged zero-variance.
CorrelationMap ncc_stream(const GrayImage& template_block, const GrayImage& reference,
                          PixelCoord origin, const ShiftRange& range,
                          DiagOrientation orientation, const MovingAverageConfig& ma,
                          const NoiseModel& noise, const DiagTables& tables,
                          std::uint64_t block_id = 0);

CorrelationMap ncc_stream(const GrayImage& template_block, const GrayImage& reference,
                          PixelCoord origin, const ShiftRange& range,
                          DiagOrientation orientation, const MovingAverageConfig& ma,
                          const NoiseModel& noise, std::uint64_t block_id = 0);

}  // namespace nccalign
