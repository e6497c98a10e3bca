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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "nccalign/diag.hpp"
#include "nccalign/errors.hpp"
#include "nccalign/power.hpp"
#include "nccalign/stream.hpp"
#include "nccalign/synthetic.hpp"
#include "oracles.hpp"

using namespace nccalign;
namespace t = nccalign::oracle;

namespace {

double sample_std(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST(MovingAverage, BoxcarWarmup) {
  const std::vector<double> x{1, 3, 5};
  const auto y = moving_average(x, MovingAverageConfig::boxcar(2));
  ASSERT_EQ(y.size(), 3u);
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 2.0);
  EXPECT_DOUBLE_EQ(y[2], 4.0);
}

TEST(MovingAverage, ConstantIsFixedPoint) {
  const std::vector<double> x(17, 0.37);
  for (const auto& cfg : {MovingAverageConfig::boxcar(1), MovingAverageConfig::boxcar(5),
                          MovingAverageConfig::boxcar(40), MovingAverageConfig::single_pole(0.2),
                          MovingAverageConfig::single_pole(1.0)}) {
    for (double v : moving_average(x, cfg)) EXPECT_NEAR(v, 0.37, 1e-15);
  }
}

TEST(MovingAverage, SinglePoleUnitAlphaIsIdentity) {
  const std::vector<double> x{0.1, 0.9, 0.4, 0.7};
  EXPECT_EQ(moving_average(x, MovingAverageConfig::single_pole(1.0)), x);
}

TEST(MovingAverage, SinglePoleRecurrence) {
  const std::vector<double> x{1.0, 0.0, 0.0};
  const auto y = moving_average(x, MovingAverageConfig::single_pole(0.5));
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 0.5);
  EXPECT_DOUBLE_EQ(y[2], 0.25);
}

TEST(MovingAverage, RejectsBadConfigAndEmptyInput) {
  const std::vector<double> x{1.0};
  EXPECT_THROW(moving_average(x, MovingAverageConfig::boxcar(0)), ArgumentError);
  EXPECT_THROW(moving_average(x, MovingAverageConfig::single_pole(0.0)), ArgumentError);
  EXPECT_THROW(moving_average(x, MovingAverageConfig::single_pole(1.5)), ArgumentError);
  EXPECT_THROW(moving_average(std::vector<double>{}, MovingAverageConfig::boxcar(2)),
               ArgumentError);
}

TEST(ZeroMeanStream, Examples) {
  for (double v : zero_mean_stream(std::vector<double>(9, 0.6), MovingAverageConfig::boxcar(3)))
    EXPECT_NEAR(v, 0.0, 1e-15);

  const auto z = zero_mean_stream(std::vector<double>{1, 3, 5}, MovingAverageConfig::boxcar(2));
  EXPECT_DOUBLE_EQ(z[0], 0.0);
  EXPECT_DOUBLE_EQ(z[1], 1.0);
  EXPECT_DOUBLE_EQ(z[2], 1.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(24);
  for (double& v : s) v = u(rng);
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 24.0;
  const auto zs = zero_mean_stream(s, MovingAverageConfig::boxcar(24));
  EXPECT_NEAR(zs.back(), s.back() - mean, 1e-12);
}

TEST(Rms, Examples) {
  EXPECT_DOUBLE_EQ(rms(std::vector<double>(5, -0.3)), 0.3);
  EXPECT_DOUBLE_EQ(rms(std::vector<double>{3, 4}), std::sqrt(12.5));
  EXPECT_DOUBLE_EQ(rms(std::vector<double>{0}), 0.0);
  EXPECT_THROW(rms(std::vector<double>{}), ArgumentError);
}

TEST(MultiplyIntegrate, NoiselessIsDotProduct) {
  const NoiseModel quiet;
  EXPECT_DOUBLE_EQ(multiply_integrate(std::vector<double>{1, 2}, std::vector<double>{3, 4}, quiet,
                                      1.0, 1.0, 0),
                   11.0);
  const std::vector<double> a{0.5, -0.25, -0.25};
  EXPECT_DOUBLE_EQ(multiply_integrate(a, a, quiet, 1.0, 1.0, 0), t::centered_sumsq(a));
  EXPECT_THROW(multiply_integrate(std::vector<double>{1}, std::vector<double>{1, 2}, quiet, 1, 1, 0),
               ArgumentError);
}

TEST(MultiplyIntegrate, MultiplierNoiseStatistics) {
  const NoiseModel noise{0.01, 0.0, 42, NoiseCadence::per_sample};
  const double rms_a = 0.3, rms_b = 0.7;
  const std::vector<double> a{0.2}, b{-0.5};
  const double clean = a[0] * b[0];
  std::vector<double> err;
  err.reserve(100000);
  for (std::uint64_t id = 0; id < 100000; ++id)
    err.push_back(multiply_integrate(a, b, noise, rms_a, rms_b, id) - clean);
  const double want = 0.01 * rms_a * rms_b;
  EXPECT_NEAR(sample_std(err) / want, 1.0, 0.02);
}

TEST(MultiplyIntegrate, IntegratorNoiseScalesWithRootLength) {
  const NoiseModel noise{0.0, 0.20, 7, NoiseCadence::per_sample};
  const std::vector<double> a(16, 0.0);
  std::vector<double> err;
  for (std::uint64_t id = 0; id < 100000; ++id)
    err.push_back(multiply_integrate(a, a, noise, 0.5, 0.5, id));
  EXPECT_NEAR(sample_std(err) / (0.20 * 0.25 * 4.0), 1.0, 0.02);
}

TEST(MultiplyIntegrate, DeterministicPerStream) {
  const NoiseModel noise{0.1, 0.2, 3, NoiseCadence::per_sample};
  const std::vector<double> a{0.1, 0.2, 0.3}, b{0.3, -0.1, 0.2};
  const double x = multiply_integrate(a, b, noise, 0.2, 0.2, 17);
  EXPECT_EQ(x, multiply_integrate(a, b, noise, 0.2, 0.2, 17));
  EXPECT_NE(x, multiply_integrate(a, b, noise, 0.2, 0.2, 18));
}

TEST(MultiplyIntegrate, PerWindowCadenceSharesOneDraw) {
  const NoiseModel noise{0.5, 0.0, 9, NoiseCadence::per_window};
  const std::vector<double> zero(10, 0.0);
  const double one = multiply_integrate(std::vector<double>{0.0}, std::vector<double>{0.0}, noise,
                                        1.0, 1.0, 5);
  EXPECT_NEAR(multiply_integrate(zero, zero, noise, 1.0, 1.0, 5), 10.0 * one, 1e-12);
}

TEST(DynamicRange, Conversions) {
  EXPECT_EQ(dynamic_range_to_noise(40), 0.01);
  EXPECT_EQ(dynamic_range_to_noise(0), 1.0);
  EXPECT_DOUBLE_EQ(dynamic_range_to_noise(20), 0.1);
  double prev = dynamic_range_to_noise(-30);
  for (double db = -29.5; db <= 120; db += 0.5) {
    const double cur = dynamic_range_to_noise(db);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(NccStream, SelfMatchNearUnityAtLongDiagonal) {
  std::mt19937_64 rng(2);
  const GrayImage ref = t::random_image(160, 160, rng);
  const GrayImage tmpl = ref.crop(16, 16, 128, 128);
  const auto m = ncc_stream(tmpl, ref, {16, 16}, ShiftRange{}, DiagOrientation::main,
                            MovingAverageConfig::boxcar(128), NoiseModel{});
  ASSERT_EQ(m.status(0, 0), ShiftStatus::valid);
  EXPECT_NEAR(m.value(0, 0), 1.0, 0.05);
}

TEST(NccStream, UnitAlphaKillsSignal) {
  std::mt19937_64 rng(3);
  const GrayImage ref = t::random_image(40, 40, rng);
  const auto m = ncc_stream(ref.crop(8, 8, 16, 16), ref, {8, 8}, ShiftRange::symmetric(3),
                            DiagOrientation::main, MovingAverageConfig::single_pole(1.0),
                            NoiseModel{});
  for (auto s : m.statuses()) EXPECT_EQ(s, ShiftStatus::zero_variance);
}

TEST(NccStream, ValuesStayInUnitIntervalUnderNoise) {
  std::mt19937_64 rng(4);
  const GrayImage ref = t::random_image(48, 48, rng);
  const NoiseModel loud{0.5, 0.5, 1, NoiseCadence::per_sample};
  const auto m = ncc_stream(ref.crop(16, 16, 16, 16), ref, {16, 16}, ShiftRange::symmetric(8),
                            DiagOrientation::anti, MovingAverageConfig::boxcar(16), loud);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.statuses()[i] != ShiftStatus::valid) continue;
    EXPECT_LE(std::abs(m.values()[i]), 1.0);
  }
}

TEST(NccStream, NoiseIndependentOfEvaluationOrder) {
  const auto pair = make_synthetic_stereo(SyntheticSpec::uniform(96, 96, {2, -1}));
  const DiagTables dt(pair.reference);
  const NoiseModel noise{0.1, 0.2, 11, NoiseCadence::per_sample};
  const auto ma = MovingAverageConfig::boxcar(16);
  auto run = [&](int x, int y, std::uint64_t id) {
    return ncc_stream(pair.template_image.crop(x, y, 16, 16), pair.reference, {x, y},
                      ShiftRange::symmetric(4), DiagOrientation::main, ma, noise, dt, id);
  };
  const auto a1 = run(16, 16, 0);
  const auto b1 = run(48, 32, 1);
  const auto b2 = run(48, 32, 1);
  const auto a2 = run(16, 16, 0);
  for (std::size_t i = 0; i < a1.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a1.values()[i]),
              std::bit_cast<std::uint64_t>(a2.values()[i]));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(b1.values()[i]),
              std::bit_cast<std::uint64_t>(b2.values()[i]));
  }
}

TEST(NccStream, NoiselessArgmaxAgreesWithDiagonal) {
  const auto pair = make_synthetic_stereo(SyntheticSpec::uniform(256, 256, {5, -3}, 21, 0.01));
  const DiagTables dt(pair.reference);
  const ShiftRange r = ShiftRange::symmetric(8);
  int agree = 0, total = 0;
  for (int y = 16; y + 32 + 16 <= 256; y += 32)
    for (int x = 16; x + 32 + 16 <= 256; x += 32) {
      const GrayImage block = pair.template_image.crop(x, y, 32, 32);
      const auto s = best_shift(ncc_stream(block, pair.reference, {x, y}, r,
                                           DiagOrientation::main, MovingAverageConfig::boxcar(32),
                                           NoiseModel{}, dt));
      const auto d = best_shift(ncc_diag(block, pair.reference, {x, y}, r));
      ++total;
      if (s && d && s->du == d->du && s->dv == d->dv) ++agree;
    }
  EXPECT_GE(static_cast<double>(agree) / total, 0.90) << agree << "/" << total;
}

TEST(NccStream, ArgmaxErrorGrowsWithMultiplierNoise) {
  const auto pair = make_synthetic_stereo(SyntheticSpec::uniform(192, 192, {-2, 4}, 5, 0.01));
  const DiagTables dt(pair.reference);
  const ShiftRange r = ShiftRange::symmetric(8);
  std::vector<double> mean_error;
  for (double f : {0.01, 0.10, 0.20}) {
    double err = 0.0;
    int n = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const NoiseModel noise{f, 0.20, seed, NoiseCadence::per_sample};
      std::uint64_t id = 0;
      for (int y = 16; y + 32 + 16 <= 192; y += 32)
        for (int x = 16; x + 32 + 16 <= 192; x += 32, ++id) {
          const auto b = best_shift(ncc_stream(pair.template_image.crop(x, y, 32, 32),
                                               pair.reference, {x, y}, r, DiagOrientation::main,
                                               MovingAverageConfig::boxcar(32), noise, dt, id));
          err += b ? std::hypot(b->du + 2, b->dv - 4) : 16.0;
          ++n;
        }
    }
    mean_error.push_back(err / n);
  }
  EXPECT_LE(mean_error[0], mean_error[1]);
  EXPECT_LE(mean_error[1], mean_error[2]);
}

TEST(PowerBudget, SixtyFourChannels) {
  const PowerBudget b = power_budget(64);
  ASSERT_EQ(b.entries.size(), 4u);
  EXPECT_EQ(b.entries[0].name, "LPF");
  EXPECT_EQ(b.entries[0].quantity, 64);
  EXPECT_NEAR(b.entries[0].reported_mw, 179.2, 1e-9);
  EXPECT_EQ(b.entries[1].quantity, 64);
  EXPECT_NEAR(b.entries[1].reported_mw, 35.13, 1e-9);
  EXPECT_EQ(b.entries[2].quantity, 32);
  EXPECT_NEAR(b.entries[2].reported_mw, 0.05856, 1e-9);
  EXPECT_EQ(b.entries[3].quantity, 32);
  EXPECT_NEAR(b.entries[3].reported_mw, 0.768, 1e-9);
  EXPECT_NEAR(b.total_mw(), 215.15, 0.01);
}

TEST(PowerBudget, OtherChannelCounts) {
  EXPECT_NEAR(power_budget(2).total_mw(), 6.723, 0.001);
  EXPECT_NEAR(power_budget(128).total_mw(), 430.31, 0.02);
  EXPECT_EQ(power_budget(0).total_mw(), 0.0);
  EXPECT_THROW(power_budget(3), ArgumentError);
  EXPECT_THROW(power_budget(-2), ArgumentError);
}

TEST(PowerBudget, TotalTracksExactSumAndIsLinear) {
  const double per_pair = power_budget(2).exact_total_mw();
  // Reported rows keep four significant figures, which stays within 0.01 mW
  // of the exact sum up to 182 channels.
  for (int ch = 0; ch <= 182; ch += 2) {
    const PowerBudget b = power_budget(ch);
    EXPECT_NEAR(b.total_mw(), b.exact_total_mw(), 0.01) << ch;
  }
  for (int ch = 0; ch <= 1024; ch += 2) {
    const PowerBudget b = power_budget(ch);
    EXPECT_NEAR(b.exact_total_mw(), per_pair * ch / 2, 1e-9 * ch);
  }
}
