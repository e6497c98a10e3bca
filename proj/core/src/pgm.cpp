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

#include "nccalign/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "nccalign/errors.hpp"

namespace nccalign {
namespace {

// Header tokens are separated by whitespace; '#' starts a comment running to
// the end of the line.
class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  std::string token(const char* field) {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) {
      throw LoadError(field, path_ + ": missing " + field + " in PGM header");
    }
    return out;
  }

  int positive_int(const char* field) {
    const std::string tok = token(field);
    if (!std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        tok.size() > 9) {
      throw LoadError(field, path_ + ": invalid " + field + " '" + tok + "'");
    }
    const int v = std::stoi(tok);
    if (v < 1) {
      throw LoadError(field, path_ + ": " + field + " must be positive");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start(const char* field) {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw LoadError(field, path_ + ": no whitespace after maxval");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LoadError("path", "cannot open " + name);
  }
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());

  HeaderReader header(bytes, name);
  const std::string magic = header.token("magic");
  if (magic != "P5") {
    throw LoadError("magic", name + ": unsupported format '" + magic + "' (only P5)");
  }
  const int width = header.positive_int("width");
  const int height = header.positive_int("height");
  const int maxval = header.positive_int("maxval");
  if (maxval != 255 && maxval != 65535) {
    throw LoadError("maxval", name + ": unsupported maxval " + std::to_string(maxval) +
                                  " (expected 255 or 65535)");
  }
  const std::size_t start = header.raster_start("maxval");
  const std::size_t bytes_per_sample = maxval == 255 ? 1 : 2;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < start + count * bytes_per_sample) {
    throw LoadError("payload", name + ": truncated payload, expected " +
                                   std::to_string(count * bytes_per_sample) + " bytes, found " +
                                   std::to_string(bytes.size() - std::min(bytes.size(), start)));
  }

  std::vector<double> data(count);
  const double scale = 1.0 / maxval;
  const unsigned char* raster = bytes.data() + start;
  for (std::size_t i = 0; i < count; ++i) {
    unsigned value = raster[i * bytes_per_sample];
    if (bytes_per_sample == 2) {
      value = (value << 8) | raster[i * 2 + 1];
    }
    data[i] = value * scale;
  }
  return GrayImage(width, height, std::move(data));
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path, int maxval) {
  if (maxval != 255 && maxval != 65535) {
    throw ArgumentError("save_pgm: maxval must be 255 or 65535, got " + std::to_string(maxval));
  }
  if (image.empty()) {
    throw ArgumentError("save_pgm: empty image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << "P5\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';

  const std::size_t bytes_per_sample = maxval == 255 ? 1 : 2;
  std::vector<unsigned char> raster(image.size() * bytes_per_sample);
  const auto pixels = image.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double v = std::clamp(pixels[i], 0.0, 1.0);
    const auto q = static_cast<unsigned>(std::floor(v * maxval + 0.5));
    if (bytes_per_sample == 1) {
      raster[i] = static_cast<unsigned char>(q);
    } else {
      raster[2 * i] = static_cast<unsigned char>(q >> 8);
      raster[2 * i + 1] = static_cast<unsigned char>(q & 0xFF);
    }
  }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace nccalign
