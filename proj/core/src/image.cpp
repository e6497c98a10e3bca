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

#include "nccalign/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nccalign/errors.hpp"

namespace nccalign {

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ArgumentError("image dimensions must be positive, got " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw ArgumentError("image dimensions must be positive, got " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ArgumentError("image data length " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw ArgumentError("image data contains non-finite intensities");
  }
}

GrayImage GrayImage::crop(int x, int y, int w, int h) const {
  if (w < 1 || h < 1 || x < 0 || y < 0 || x + w > width_ || y + h > height_) {
    throw ArgumentError("crop window " + std::to_string(w) + "x" + std::to_string(h) +
                        " at (" + std::to_string(x) + "," + std::to_string(y) +
                        ") leaves the " + std::to_string(width_) + "x" +
                        std::to_string(height_) + " image");
  }
  GrayImage out(w, h);
  for (int r = 0; r < h; ++r) {
    auto src = row(y + r).subspan(static_cast<std::size_t>(x), static_cast<std::size_t>(w));
    std::copy(src.begin(), src.end(),
              out.data_.begin() + static_cast<std::ptrdiff_t>(r) * w);
  }
  return out;
}

ImageMask ImageMask::all(int width, int height) {
  ImageMask m;
  m.width = width;
  m.height = height;
  m.valid.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 1);
  return m;
}

std::size_t ImageMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), 1));
}

}  // namespace nccalign
