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

#include <stdexcept>
#include <string>
#include <utility>

namespace nccalign {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument combination (shape mismatch, bad range, odd channel count...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable image file. `field()` names the offending part of
/// the file ("magic", "width", "height", "maxval", "payload", "path").
class LoadError : public Error {
 public:
  LoadError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Synthetic stereo description violates its invariants.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// No block of the template produced a usable disparity.
class UnalignableError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for its input (zero variance, zero baseline).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace nccalign
