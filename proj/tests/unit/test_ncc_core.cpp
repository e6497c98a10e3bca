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

#include <cmath>
#include <random>

#include "nccalign/errors.hpp"
#include "nccalign/ncc.hpp"
#include "oracles.hpp"

using namespace nccalign;
namespace t = nccalign::oracle;

namespace {

GrayImage affine(const GrayImage& img, double a, double b) {
  GrayImage out = img;
  for (double& v : out.pixels()) v = a * v + b;
  return out;
}

// Two-pass oracle for a single shift.
std::optional<double> oracle_full(const GrayImage& tmpl, const GrayImage& ref, PixelCoord o,
                                  int du, int dv) {
  const int x = o.x + du, y = o.y + dv;
  if (x < 0 || y < 0 || x + tmpl.width() > ref.width() || y + tmpl.height() > ref.height())
    return std::nullopt;
  return t::pearson(t::window_pixels(tmpl, 0, 0, tmpl.width(), tmpl.height()),
                    t::window_pixels(ref, x, y, tmpl.width(), tmpl.height()));
}

}  // namespace

TEST(SumTables, ConstantField) {
  const SumTables st(GrayImage(3, 3, 0.5));
  EXPECT_DOUBLE_EQ(st.running_sum(2, 2), 4.5);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) EXPECT_NEAR(st.window_sum(x, y, 2, 2), 2.0, 1e-12);
}

TEST(SumTables, SinglePixel) {
  const SumTables st(GrayImage(1, 1, 0.3));
  EXPECT_NEAR(st.running_sum(0, 0), 0.3, 1e-15);
  EXPECT_NEAR(st.running_sumsq(0, 0), 0.09, 1e-15);
}

TEST(SumTables, WindowVarianceMatchesTwoPass) {
  std::mt19937_64 rng(5);
  const GrayImage img = t::random_image(16, 16, rng);
  const SumTables st = build_sum_tables(img);
  for (int h = 1; h <= 16; h += 3)
    for (int w = 1; w <= 16; w += 3)
      for (int y = 0; y + h <= 16; ++y)
        for (int x = 0; x + w <= 16; ++x) {
          const auto px = t::window_pixels(img, x, y, w, h);
          ASSERT_NEAR(st.window_stats(x, y, w, h).variance_sum, t::centered_sumsq(px), 1e-12);
        }
}

TEST(SumTables, RunningSumMonotoneForNonNegative) {
  std::mt19937_64 rng(6);
  const SumTables st(t::random_image(12, 9, rng));
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 12; ++x) {
      if (x) {
        EXPECT_GE(st.running_sum(x, y), st.running_sum(x - 1, y));
      }
      if (y) {
        EXPECT_GE(st.running_sum(x, y), st.running_sum(x, y - 1));
      }
    }
}

TEST(BlockStats, MeanAndVariance) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const BlockStats s = block_stats(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance_sum, 5.0);
}

TEST(ShiftRange, Validation) {
  EXPECT_THROW((ShiftRange{1, 0, 0, 0}.validate()), ArgumentError);
  EXPECT_EQ(ShiftRange::symmetric(2).count(), 25u);
}

TEST(NccNaive, PerfectMatchAndAnticorrelation) {
  std::mt19937_64 rng(1);
  const GrayImage ref = t::random_image(32, 32, rng);
  const GrayImage tmpl = ref.crop(8, 8, 16, 16);
  const auto m = ncc_full_naive(tmpl, ref, {8, 8}, ShiftRange::symmetric(2));
  EXPECT_NEAR(m.value(0, 0), 1.0, 1e-9);

  const auto neg = ncc_full_naive(affine(tmpl, -1.0, 1.0), ref, {8, 8}, ShiftRange{});
  EXPECT_NEAR(neg.value(0, 0), -1.0, 1e-9);
}

TEST(NccNaive, FlatTemplateFlagsEveryShift) {
  std::mt19937_64 rng(2);
  const GrayImage ref = t::random_image(24, 24, rng);
  const auto m = ncc_full_naive(GrayImage(8, 8, 0.3), ref, {8, 8}, ShiftRange::symmetric(3));
  for (auto s : m.statuses()) EXPECT_EQ(s, ShiftStatus::zero_variance);
  for (double v : m.values()) EXPECT_TRUE(std::isnan(v));
  EXPECT_FALSE(best_shift(m).has_value());
}

TEST(NccNaive, OutOfBoundsShiftsAreFlagged) {
  std::mt19937_64 rng(3);
  const GrayImage ref = t::random_image(20, 20, rng);
  const auto m = ncc_full_naive(ref.crop(0, 0, 8, 8), ref, {0, 0}, ShiftRange::symmetric(2));
  EXPECT_EQ(m.status(-1, 0), ShiftStatus::out_of_bounds);
  EXPECT_EQ(m.status(0, -2), ShiftStatus::out_of_bounds);
  EXPECT_EQ(m.status(2, 2), ShiftStatus::valid);
}

TEST(NccNaive, TemplateLargerThanReferenceThrows) {
  EXPECT_THROW(ncc_full_naive(GrayImage(10, 10), GrayImage(8, 8), {0, 0}, ShiftRange{}),
               ArgumentError);
}

TEST(NccFast, MatchesTwoPassOracle) {
  std::mt19937_64 rng(4);
  const GrayImage ref = t::random_image(40, 40, rng);
  const GrayImage tmpl = t::random_image(12, 12, rng);
  const ShiftRange r = ShiftRange::symmetric(4);
  const auto m = ncc_full_fast(tmpl, ref, {14, 14}, r, build_sum_tables(ref));
  for (int dv = r.dv_min; dv <= r.dv_max; ++dv)
    for (int du = r.du_min; du <= r.du_max; ++du) {
      const auto want = oracle_full(tmpl, ref, {14, 14}, du, dv);
      ASSERT_TRUE(want.has_value());
      EXPECT_NEAR(m.value(du, dv), *want, 1e-9);
    }
}

TEST(NccFast, EquivalentToNaiveOnRandomInstances) {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<int> pos(0, 32);
  const ShiftRange r = ShiftRange::symmetric(6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GrayImage ref = t::random_image(48, 48, rng);
    const GrayImage tmpl = t::random_image(16, 16, rng);
    const PixelCoord o{pos(rng), pos(rng)};
    const auto fast = ncc_full_fast(tmpl, ref, o, r, build_sum_tables(ref));
    const auto naive = ncc_full_naive(tmpl, ref, o, r);
    for (std::size_t k = 0; k < naive.size(); ++k) {
      ASSERT_EQ(fast.statuses()[k], naive.statuses()[k]);
      if (naive.statuses()[k] == ShiftStatus::valid) {
        worst = std::max(worst, std::abs(fast.values()[k] - naive.values()[k]));
        EXPECT_LE(std::abs(naive.values()[k]), 1.0 + 1e-9);
      }
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(NccFast, ShiftedCopyPeaksAtShift) {
  std::mt19937_64 rng(8);
  const GrayImage ref = t::random_image(40, 40, rng);
  const GrayImage tmpl = ref.crop(12 + 2, 12 + 1, 16, 16);
  const auto m = ncc_full_fast(tmpl, ref, {12, 12}, ShiftRange::symmetric(4), SumTables(ref));
  const auto best = best_shift(m);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->du, 2);
  EXPECT_EQ(best->dv, 1);
  EXPECT_NEAR(best->coeff, 1.0, 1e-9);
}

TEST(NccFast, TableMismatchThrows) {
  const GrayImage ref(20, 20, 0.1);
  EXPECT_THROW(ncc_full_fast(GrayImage(4, 4), ref, {0, 0}, ShiftRange{}, SumTables(GrayImage(10, 10))),
               ArgumentError);
}

TEST(NccFast, AffineInvariance) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const GrayImage ref = t::random_image(36, 36, rng);
    const GrayImage tmpl = t::random_image(12, 12, rng);
    const SumTables st(ref);
    const ShiftRange r = ShiftRange::symmetric(5);
    const auto base = ncc_full_fast(tmpl, ref, {12, 12}, r, st);
    std::uniform_real_distribution<double> a(0.05, 5.0), b(-2.0, 2.0);
    const auto moved = ncc_full_fast(affine(tmpl, a(rng), b(rng)), ref, {12, 12}, r, st);
    for (std::size_t k = 0; k < base.size(); ++k)
      EXPECT_NEAR(base.values()[k], moved.values()[k], 1e-9);
    const auto b0 = best_shift(base), b1 = best_shift(moved);
    EXPECT_EQ(b0->du, b1->du);
    EXPECT_EQ(b0->dv, b1->dv);
  }
}

TEST(NccFast, RoleSymmetryAtZeroShift) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 20; ++i) {
    const GrayImage a = t::random_image(10, 10, rng);
    const GrayImage b = t::random_image(10, 10, rng);
    const double ab = ncc_full_fast(a, b, {0, 0}, ShiftRange{}, SumTables(b)).value(0, 0);
    const double ba = ncc_full_fast(b, a, {0, 0}, ShiftRange{}, SumTables(a)).value(0, 0);
    EXPECT_NEAR(ab, ba, 1e-12);
  }
}

TEST(NccFast, CountsFullWindowMultipliesPerShift) {
  std::mt19937_64 rng(11);
  const GrayImage ref = t::random_image(40, 40, rng);
  OpCounts c;
  const ShiftRange r = ShiftRange::symmetric(2);
  ncc_full_fast(t::random_image(16, 16, rng), ref, {12, 12}, r, SumTables(ref), &c);
  EXPECT_EQ(c.shifts, r.count());
  EXPECT_EQ(c.multiplies, r.count() * 256u);
}

TEST(BestShift, UniqueMaximum) {
  CorrelationMap m(ShiftRange{-4, 4, -4, 4});
  for (std::size_t i = 0; i < m.size(); ++i) m.set_valid(i, 0.1);
  m.set_valid(m.index(3, -2), 0.98);
  const auto b = best_shift(m);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->du, 3);
  EXPECT_EQ(b->dv, -2);
  EXPECT_EQ(b->coeff, 0.98);
}

TEST(BestShift, TieBreakPrefersSmallerNormThenDv) {
  CorrelationMap m(ShiftRange::symmetric(2));
  for (std::size_t i = 0; i < m.size(); ++i) m.set_valid(i, 0.0);
  m.set_valid(m.index(1, 0), 0.7);
  m.set_valid(m.index(0, 1), 0.7);
  m.set_valid(m.index(2, 2), 0.7);
  const auto b = best_shift(m);
  EXPECT_EQ(b->du, 1);
  EXPECT_EQ(b->dv, 0);

  m.set_valid(m.index(-1, 0), 0.7);
  EXPECT_EQ(best_shift(m)->du, -1);
}

TEST(BestShift, NoValidShift) {
  CorrelationMap m(ShiftRange::symmetric(1));
  for (std::size_t i = 0; i < m.size(); ++i) m.set_flag(i, ShiftStatus::zero_variance);
  EXPECT_FALSE(best_shift(m).has_value());
}
