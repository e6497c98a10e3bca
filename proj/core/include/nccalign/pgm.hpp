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

#include <filesystem>

#include "nccalign/image.hpp"

namespace nccalign {

/// Reads a binary PGM ("P5") with maxval 255 or 65535. Samples are divided by
/// maxval; 16-bit samples are most-significant byte first. Throws LoadError
/// naming the offending field.
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes a binary PGM. Values are clamped to [0,1] and quantized with
/// round-half-up. maxval must be 255 or 65535.
void save_pgm(const GrayImage& image, const std::filesystem::path& path, int maxval = 255);

}  // namespace nccalign
