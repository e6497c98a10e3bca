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

#include <benchmark/benchmark.h>

#include "nccalign/align.hpp"
#include "nccalign/diag.hpp"
#include "nccalign/ncc.hpp"
#include "nccalign/stream.hpp"
#include "nccalign/synthetic.hpp"

namespace {

using namespace nccalign;

const SyntheticPair& pair() {
  static const SyntheticPair p = make_synthetic_stereo(
      SyntheticSpec::quadrants(512, 512, {{3, 5}, {-6, 2}, {8, -4}, {-2, -7}}, 7, 0.01));
  return p;
}

// One block at the image centre, search ±8; range(0) is the block side.
void BM_FullFast(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PixelCoord o{256 - d / 2, 256 - d / 2};
  const GrayImage block = pair().template_image.crop(o.x, o.y, d, d);
  const SumTables st(pair().reference);
  for (auto _ : state) {
    auto m = ncc_full_fast(block, pair().reference, o, ShiftRange::symmetric(8), st);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * 289);
}
BENCHMARK(BM_FullFast)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_FullNaive(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PixelCoord o{256 - d / 2, 256 - d / 2};
  const GrayImage block = pair().template_image.crop(o.x, o.y, d, d);
  for (auto _ : state) {
    auto m = ncc_full_naive(block, pair().reference, o, ShiftRange::symmetric(8));
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * 289);
}
BENCHMARK(BM_FullNaive)->Arg(16)->Arg(32)->Arg(64);

void BM_DiagFast(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PixelCoord o{256 - d / 2, 256 - d / 2};
  const GrayImage block = pair().template_image.crop(o.x, o.y, d, d);
  const DiagTables dt(pair().reference);
  for (auto _ : state) {
    auto m = ncc_diag_fast(block, pair().reference, o, ShiftRange::symmetric(8),
                           DiagOrientation::main, dt);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * 289);
}
BENCHMARK(BM_DiagFast)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_Stream(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PixelCoord o{256 - d / 2, 256 - d / 2};
  const GrayImage block = pair().template_image.crop(o.x, o.y, d, d);
  const DiagTables dt(pair().reference);
  const NoiseModel noise{0.01, 0.20, 1, NoiseCadence::per_sample};
  for (auto _ : state) {
    auto m = ncc_stream(block, pair().reference, o, ShiftRange::symmetric(8),
                        DiagOrientation::main, MovingAverageConfig::boxcar(d), noise, dt);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * 289);
}
BENCHMARK(BM_Stream)->Arg(32)->Arg(128);

void BM_SumTables(benchmark::State& state) {
  for (auto _ : state) {
    SumTables st(pair().reference);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_SumTables);

void BM_DiagTables(benchmark::State& state) {
  for (auto _ : state) {
    DiagTables dt(pair().reference);
    benchmark::DoNotOptimize(dt);
  }
}
BENCHMARK(BM_DiagTables);

void BM_EstimateDisparity(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const BlockGrid grid = partition_template(pair().template_image, 32, 0.10);
  AlignOptions opt;
  opt.method = method;
  opt.threads = 1;
  for (auto _ : state) {
    auto f = estimate_disparity(pair().template_image, pair().reference, grid, opt);
    benchmark::DoNotOptimize(f);
  }
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_EstimateDisparity)
    ->Arg(static_cast<int>(Method::full_fast))
    ->Arg(static_cast<int>(Method::diag_fast))
    ->Arg(static_cast<int>(Method::stream))
    ->Unit(benchmark::kMillisecond);

void BM_WarpDense(benchmark::State& state) {
  const BlockGrid grid = partition_template(pair().template_image, 32, 0.10);
  AlignOptions opt;
  const auto field =
      fill_invalid(estimate_disparity(pair().template_image, pair().reference, grid, opt));
  const auto dense = interpolate_disparity(field, grid, 512, 512);
  for (auto _ : state) {
    auto w = warp(pair().template_image, dense);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_WarpDense)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
