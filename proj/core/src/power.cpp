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

#include "nccalign/power.hpp"

#include <cmath>
#include <string>

#include "nccalign/errors.hpp"

namespace nccalign {
namespace {

struct Component {
  const char* name;
  double unit_power_mw;
  int per_pair;  // units per template/reference channel pair
};

// Circuit-simulation estimates at 40 dB dynamic range.
constexpr Component kComponents[] = {
    {"LPF", 2.8, 2},
    {"Summer", 0.549, 2},
    {"Multiplier", 0.00183, 1},
    {"Integrator", 0.024, 1},
};

constexpr int kReportedDigits = 4;

}  // namespace

double truncate_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  const double magnitude = std::floor(std::log10(std::fabs(value)));
  const double scale = std::pow(10.0, digits - 1 - magnitude);
  // The relative nudge keeps products such as 2.8 * 64 = 179.1999... at 179.2.
  return std::trunc(value * scale * (1.0 + 1e-12)) / scale;
}

double PowerBudget::total_mw() const noexcept {
  double total = 0.0;
  for (const auto& e : entries) total += e.reported_mw;
  return total;
}

double PowerBudget::exact_total_mw() const noexcept {
  double total = 0.0;
  for (const auto& e : entries) total += e.exact_mw();
  return total;
}

PowerBudget power_budget(int channels) {
  if (channels < 0 || channels % 2 != 0) {
    throw ArgumentError("channel count must be even and non-negative, got " +
                        std::to_string(channels));
  }
  PowerBudget budget;
  budget.channels = channels;
  for (const auto& c : kComponents) {
    PowerEntry e;
    e.name = c.name;
    e.unit_power_mw = c.unit_power_mw;
    e.quantity = channels / 2 * c.per_pair;
    e.reported_mw = truncate_significant(e.exact_mw(), kReportedDigits);
    budget.entries.push_back(e);
  }
  return budget;
}

}  // namespace nccalign
