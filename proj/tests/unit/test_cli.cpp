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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "nccalign/errors.hpp"
#include "nccalign/pgm.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace nccalign;
using namespace nccalign::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("nccalign_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig small_config(const char* sub) const {
    RunConfig cfg;
    cfg.command = sub;
    cfg.block_size = 32;
    cfg.range = ShiftRange::symmetric(8);
    cfg.synthetic = SyntheticSpec::quadrants(256, 256, {{3, 5}, {-6, 2}, {8, -4}, {-2, -7}}, 7,
                                             0.01);
    cfg.out_dir = dir_ / sub;
    return cfg;
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body_of(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line, out;
  while (std::getline(in, line))
    if (!line.starts_with("#")) out += line + "\n";
  return out;
}

std::vector<std::string> header_of(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line) && line.starts_with("# ")) lines.push_back(line.substr(2));
  return lines;
}

int run_tool(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(NCCALIGN_EXE) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunConfig, HeaderRoundTrip) {
  RunConfig cfg;
  cfg.command = "noise-sweep";
  apply_setting(cfg, "method", "stream");
  apply_setting(cfg, "block", "48");
  apply_setting(cfg, "crop", "0.05");
  apply_setting(cfg, "search-du", "-3:7");
  apply_setting(cfg, "search-dv", "-2:2");
  apply_setting(cfg, "ma", "pole:0.125");
  apply_setting(cfg, "orientation", "anti");
  apply_setting(cfg, "noise-mult", "0.1");
  apply_setting(cfg, "noise-cadence", "window");
  apply_setting(cfg, "seed", "99");
  apply_setting(cfg, "size", "320x200");
  apply_setting(cfg, "regions", "1x2");
  apply_setting(cfg, "shifts", "1,-1;2,3");
  apply_setting(cfg, "fractions", "0.3,0.02");
  apply_setting(cfg, "mode", "random");
  apply_setting(cfg, "parameter", "0.25");

  std::ostringstream out;
  for (const auto& l : cfg.header_lines()) out << "# " << l << "\n";
  out << "col\n";
  RunConfig back;
  std::istringstream in(out.str());
  apply_header(back, in);
  EXPECT_EQ(back.header_lines(), cfg.header_lines());
  EXPECT_EQ(back.command, "noise-sweep");
  EXPECT_EQ(back.search_range(), (ShiftRange{-3, 7, -2, 2}));
  EXPECT_EQ(back.synthetic.shifts[1], (RegionShift{2, 3}));
}

TEST(RunConfig, RejectsBadSettings) {
  RunConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "block", "ten"), ArgumentError);
  EXPECT_THROW(apply_setting(cfg, "method", "fft"), ArgumentError);
  EXPECT_THROW(apply_setting(cfg, "search-du", "5"), ArgumentError);
  EXPECT_THROW(apply_setting(cfg, "ma", "median:3"), ArgumentError);
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), ArgumentError);
  cfg.channels = 3;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(RunConfig, DefaultsFollowBlockSize) {
  RunConfig cfg;
  apply_setting(cfg, "block", "128");
  EXPECT_EQ(cfg.search_range(), ShiftRange::symmetric(16));
  EXPECT_EQ(cfg.noise.integrator_fraction, 0.20);
}

TEST_F(CliTest, AlignIdenticalInputs) {
  const auto pair = make_synthetic_stereo(SyntheticSpec::uniform(128, 128, {0, 0}));
  const fs::path img = dir_ / "same.pgm";
  save_pgm(pair.reference, img, 65535);
  RunConfig cfg = small_config("align");
  cfg.template_path = img.string();
  cfg.reference_path = img.string();
  cfg.block_size = 16;
  const auto res = cmd_align(cfg);
  EXPECT_NEAR(res.corr_before, 1.0, 1e-12);
  EXPECT_NEAR(res.corr_after, 1.0, 1e-12);
  EXPECT_NEAR(res.improvement_pct, 0.0, 1e-9);
  EXPECT_FALSE(res.match_rate.has_value());
  for (const char* f : {"disparity.csv", "metrics.csv", "aligned.pgm", "disparity_x.pgm",
                        "disparity_y.pgm"})
    EXPECT_TRUE(fs::exists(cfg.out_dir / f)) << f;
}

TEST_F(CliTest, AlignSyntheticQuadrants) {
  RunConfig cfg = small_config("align");
  cfg.synthetic.width = cfg.synthetic.height = 512;
  cfg.method = Method::diag;
  const auto res = cmd_align(cfg);
  EXPECT_GT(res.corr_after, res.corr_before);
  ASSERT_TRUE(res.match_rate.has_value());
  EXPECT_GE(*res.match_rate, 0.95);

  std::istringstream in(body_of(cfg.out_dir / "disparity.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "block_row,block_col,du,dv,coeff,status");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, res.grid.count());
  EXPECT_EQ(header_of(cfg.out_dir / "metrics.csv").front(), "nccalign/1 align");
}

TEST_F(CliTest, GenWritesPairAndTruth) {
  RunConfig cfg = small_config("gen");
  cmd_gen(cfg);
  const auto pair = make_synthetic_stereo(cfg.synthetic);
  const GrayImage ref = load_pgm(cfg.out_dir / "reference.pgm");
  EXPECT_EQ(ref.width(), 256);
  for (std::size_t i = 0; i < ref.size(); ++i)
    ASSERT_NEAR(ref.pixels()[i], pair.reference.pixels()[i], 1.0 / 510 + 1e-12);
  const std::string truth = body_of(cfg.out_dir / "truth.csv");
  EXPECT_NE(truth.find("0,1,128,0,256,128,-6,2"), std::string::npos) << truth;
}

TEST_F(CliTest, BenchCountsBlockSideRatio) {
  RunConfig cfg = small_config("bench");
  cfg.synthetic = SyntheticSpec::uniform(320, 320, {1, 1});
  cfg.block_size = 128;
  cfg.range = ShiftRange::symmetric(2);
  cfg.bench_runs = 1;
  const auto a = cmd_bench(cfg);
  EXPECT_EQ(a.mult_ratio, 128u);
  const std::string first = slurp(cfg.out_dir / "bench_ops.csv");
  const auto b = cmd_bench(cfg);
  EXPECT_EQ(a.ops[0].counts, b.ops[0].counts);
  EXPECT_EQ(a.ops[1].counts, b.ops[1].counts);
  EXPECT_EQ(slurp(cfg.out_dir / "bench_ops.csv"), first);
  EXPECT_EQ(a.timing[0].run_ms.size(), 1u);
}

TEST_F(CliTest, NoiseSweepZeroFractionMatchesNoiselessStream) {
  RunConfig cfg = small_config("noise-sweep");
  cfg.multiplier_fractions = {0.0};
  cfg.noise.integrator_fraction = 0.0;
  cfg.seed_count = 2;
  const auto rep = cmd_noise_sweep(cfg);

  RunConfig plain = small_config("align");
  plain.method = Method::stream;
  plain.noise.integrator_fraction = 0.0;
  const auto input = load_input(plain);
  const auto res = run_alignment(input.template_image, input.reference, input.truth, plain,
                                 plain.align_options());
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.corr_after, res.corr_after);
    EXPECT_EQ(r.match_rate, *res.match_rate);
  }
}

TEST_F(CliTest, NoiseSweepKeepsFractionOrderAndSeeds) {
  RunConfig cfg = small_config("noise-sweep");
  cfg.multiplier_fractions = {0.2, 0.01};
  cfg.seed_count = 2;
  cfg.seed = 40;
  const auto rep = cmd_noise_sweep(cfg);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_EQ(rep.rows[0].multiplier_fraction, 0.2);
  EXPECT_EQ(rep.rows[0].noise_seed, 40u);
  EXPECT_EQ(rep.rows[1].noise_seed, 41u);
  EXPECT_EQ(rep.rows[2].multiplier_fraction, 0.01);
  EXPECT_EQ(rep.summary[1].runs, 2);
  const std::string body = body_of(cfg.out_dir / "noise_sweep.csv");
  EXPECT_LT(body.find("0.2,0.2,40,"), body.find("0.01,0.2,40,"));
}

TEST_F(CliTest, RobustnessUniformScaleKeepsField) {
  RunConfig cfg = small_config("robustness");
  cfg.method = Method::diag;
  const auto rows = cmd_robustness(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].blocks_equal_baseline, rows[1].blocks);
}

TEST_F(CliTest, RobustnessRandomZeroAmplitudeIsBaseline) {
  RunConfig cfg = small_config("robustness");
  cfg.robustness_mode = RobustnessMode::random;
  cfg.robustness_parameter = 0.0;
  const auto rows = cmd_robustness(cfg);
  EXPECT_EQ(rows[1].blocks_equal_baseline, rows[1].blocks);
  EXPECT_EQ(rows[1].corr_after, rows[0].corr_after);
}

TEST_F(CliTest, PowerListing) {
  RunConfig cfg = small_config("power");
  std::ostringstream out;
  const auto b = cmd_power(cfg, out);
  EXPECT_NEAR(b.total_mw(), 215.15, 0.01);
  EXPECT_NE(out.str().find("179.2mW"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("1.83uW/Multiplier"), std::string::npos);
  EXPECT_NE(body_of(cfg.out_dir / "power.csv").find("Total,,,215.15"), std::string::npos);

  cfg.channels = 2;
  EXPECT_NEAR(cmd_power(cfg, out).total_mw(), 6.723, 0.001);
}

TEST_F(CliTest, ReplayReproducesCsvBodies) {
  RunConfig cfg = small_config("noise-sweep");
  cfg.seed_count = 2;
  cmd_noise_sweep(cfg);
  RunConfig again;
  apply_header(again, cfg.out_dir / "noise_sweep.csv");
  again.out_dir = dir_ / "replay";
  cmd_noise_sweep(again);
  for (const char* f : {"noise_sweep.csv", "noise_sweep_summary.csv"}) {
    EXPECT_EQ(slurp(cfg.out_dir / f), slurp(again.out_dir / f)) << f;
  }
}

TEST(ExitStatus, Mapping) {
  EXPECT_EQ(exit_status_for(UnalignableError("x")), 1);
  EXPECT_EQ(exit_status_for(MetricError("x")), 1);
  EXPECT_EQ(exit_status_for(ArgumentError("x")), 2);
  EXPECT_EQ(exit_status_for(IoError("x")), 2);
  EXPECT_EQ(exit_status_for(LoadError("magic", "x")), 2);
}

TEST_F(CliTest, ToolExitCodes) {
  const fs::path log = dir_ / "log.txt";
  const fs::path missing = dir_ / "absent.pgm";
  EXPECT_EQ(run_tool("align --template " + missing.string() + " --reference " +
                         missing.string() + " --out " + dir_.string(),
                     log),
            2);
  const std::string msg = slurp(log);
  EXPECT_NE(msg.find(missing.string()), std::string::npos) << msg;
  EXPECT_EQ(std::count(msg.begin(), msg.end(), '\n'), 1);

  EXPECT_EQ(run_tool("power --channels 3 --out " + dir_.string(), log), 2);
  EXPECT_EQ(run_tool("power --out " + dir_.string(), log), 0);
  EXPECT_EQ(run_tool("frobnicate", log), 2);

  // A featureless pair cannot be aligned.
  save_pgm(GrayImage(64, 64, 0.5), dir_ / "flat.pgm");
  const std::string flat = (dir_ / "flat.pgm").string();
  EXPECT_EQ(run_tool("align --block 16 --template " + flat + " --reference " + flat + " --out " +
                         dir_.string(),
                     log),
            1);
}
