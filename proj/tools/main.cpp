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

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"
#include "nccalign/errors.hpp"
#include "run_config.hpp"

namespace {

using nccalign::cli::RunConfig;

struct Flags {
  std::map<std::string, std::string> settings;
  std::string replay;
  std::string out = ".";
  unsigned threads = 0;
};

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> help{
      {"method", "full|full-fast|diag|diag-fast|stream"},
      {"block", "block side length in pixels"},
      {"crop", "border fraction dropped on each axis, at most 0.10"},
      {"search-du", "horizontal search range MIN:MAX or auto"},
      {"search-dv", "vertical search range MIN:MAX or auto"},
      {"ma", "moving average boxcar:L, pole:ALPHA or auto"},
      {"orientation", "diagonal orientation main|anti"},
      {"noise-mult", "multiplier noise fraction"},
      {"noise-int", "integrator noise fraction"},
      {"noise-cadence", "noise draw cadence sample|window"},
      {"seed", "noise seed"},
      {"template", "template PGM path, or synthetic"},
      {"reference", "reference PGM path, or synthetic"},
      {"size", "synthetic size WxH"},
      {"regions", "synthetic region grid RxC"},
      {"shifts", "synthetic region shifts du,dv;du,dv;..."},
      {"texture-seed", "synthetic texture seed"},
      {"noise-floor", "synthetic template noise standard deviation"},
      {"maxval", "PGM output maxval, 255 or 65535"},
      {"fractions", "noise-sweep multiplier fractions, comma separated"},
      {"seeds", "noise-sweep seeds per fraction"},
      {"mode", "robustness perturbation uniform|random"},
      {"parameter", "robustness scale factor or amplitude"},
      {"channels", "power budget channel count"},
      {"runs", "bench timed runs per method"},
  };
  return help;
}

void add_flags(CLI::App& sub, Flags& flags) {
  for (const auto& key : nccalign::cli::setting_keys()) {
    auto it = flag_help().find(key);
    sub.add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags.settings[key] = v; },
        it == flag_help().end() ? std::string() : it->second);
  }
  sub.add_option("--replay", flags.replay, "apply the '#' header of a CSV written by this tool");
  sub.add_option("--out", flags.out, "output directory");
  sub.add_option("--threads", flags.threads, "worker threads, 0 for hardware concurrency");
}

RunConfig build_config(const std::string& command, const Flags& flags) {
  RunConfig cfg;
  if (!flags.replay.empty()) nccalign::cli::apply_header(cfg, std::filesystem::path(flags.replay));
  cfg.command = command;
  for (const auto& key : nccalign::cli::setting_keys()) {
    auto it = flags.settings.find(key);
    if (it != flags.settings.end()) nccalign::cli::apply_setting(cfg, key, it->second);
  }
  cfg.out_dir = flags.out;
  cfg.threads = flags.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nccalign: block-wise NCC disparity estimation and alignment"};
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"align", "estimate disparity and align the template to the reference"},
      {"bench", "operation counts and timing of full-fast against diag-fast"},
      {"noise-sweep", "streaming alignment accuracy over multiplier noise levels"},
      {"robustness", "alignment under intensity perturbation of the template"},
      {"power", "analog front-end power budget"},
      {"gen", "write a synthetic template/reference pair and its ground truth"},
  };
  for (const auto& [name, desc] : commands) add_flags(*app.add_subcommand(name, desc), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = build_config(command, flags);
    if (command == "align") {
      const auto res = nccalign::cli::cmd_align(cfg);
      std::cout << "corr_before=" << res.corr_before << " corr_after=" << res.corr_after
                << " improvement_pct=" << res.improvement_pct << '\n';
    } else if (command == "bench") {
      const auto rep = nccalign::cli::cmd_bench(cfg);
      std::cout << "mult_ratio=" << rep.mult_ratio << " speedup=" << rep.speedup << '\n';
    } else if (command == "noise-sweep") {
      nccalign::cli::cmd_noise_sweep(cfg);
    } else if (command == "robustness") {
      nccalign::cli::cmd_robustness(cfg);
    } else if (command == "power") {
      nccalign::cli::cmd_power(cfg, std::cout);
    } else if (command == "gen") {
      nccalign::cli::cmd_gen(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "nccalign: " << e.what() << '\n';
    return nccalign::cli::exit_status_for(e);
  }
  return 0;
}
