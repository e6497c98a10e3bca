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

#include <string>
#include <vector>

namespace nccalign {

struct PowerEntry {
  std::string name;
  double unit_power_mw = 0.0;
  int quantity = 0;
  /// unit_power_mw * quantity, truncated to four significant figures (the
  /// reporting precision of the reference power table).
  double reported_mw = 0.0;

  double exact_mw() const noexcept { return unit_power_mw * quantity; }
};

struct PowerBudget {
  int channels = 0;
  std::vector<PowerEntry> entries;

  /// Sum of the reported rows.
  double total_mw() const noexcept;
  double exact_total_mw() const noexcept;
};

/// Analog correlator power for `channels` channels: one low-pass filter and one
/// summer per channel, one multiplier and one integrator per template/reference
/// channel pair. Throws ArgumentError for odd or negative counts.
PowerBudget power_budget(int channels);

/// Truncate toward zero, keeping `digits` significant figures.
double truncate_significant(double value, int digits);

}  // namespace nccalign
