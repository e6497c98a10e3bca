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

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "nccalign/errors.hpp"

namespace nccalign::cli {

/// Shortest representation that round-trips; "nan" for NaN.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Console rendering: at most 10 significant digits, so sums of rounded
/// rows do not print their binary residue.
inline std::string format_display(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

inline std::string format_number(long long v) { return std::to_string(v); }
inline std::string format_number(unsigned long long v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }
inline std::string format_number(unsigned v) { return std::to_string(v); }
inline std::string format_number(unsigned long v) { return std::to_string(v); }
inline std::string format_number(long v) { return std::to_string(v); }

/// Comma-separated output: '#' header lines, one column line, unquoted
/// fields. Fields must not contain commas or newlines.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header_lines,
            const std::vector<std::string>& columns)
      : out_(path), path_(path), columns_(columns.size()) {
    if (!out_) throw IoError("cannot write " + path.string());
    for (const auto& line : header_lines) out_ << "# " << line << '\n';
    write_fields(columns);
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    std::vector<std::string> cells{cell(fields)...};
    write_fields(cells);
  }

  void row_strings(const std::vector<std::string>& cells) { write_fields(cells); }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  static std::string cell(const char* s) { return s; }
  template <class T>
  static std::string cell(const T& v) {
    return format_number(v);
  }

  void write_fields(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) {
      throw Error("csv row has " + std::to_string(cells.size()) + " fields, expected " +
                  std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("failed writing " + path_.string());
  }

  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
};

}  // namespace nccalign::cli
