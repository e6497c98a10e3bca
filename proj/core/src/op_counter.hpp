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

#include "nccalign/ncc.hpp"

namespace nccalign::detail {

// Counting policies for the numerator kernels. NullCounter compiles away;
// TallyCounter records every multiply and accumulate.
struct NullCounter {
  void mul() const noexcept {}
  void add() const noexcept {}
  void shift() const noexcept {}
};

struct TallyCounter {
  OpCounts* counts;
  void mul() const noexcept { ++counts->multiplies; }
  void add() const noexcept { ++counts->additions; }
  void shift() const noexcept { ++counts->shifts; }
};

}  // namespace nccalign::detail
